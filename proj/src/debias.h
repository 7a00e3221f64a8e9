// Copyright 2026 The mcdebias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MCDEBIAS_SRC_DEBIAS_H_
#define MCDEBIAS_SRC_DEBIAS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compose.h"
#include "embeddings.h"
#include "subspace.h"
#include "types.h"
#include "wordsets.h"

namespace mcdebias {

enum class DebiasStrategy { kSingle, kSequential, kSum, kMean, kJosec };

// Accepts single|seq|sequential|sum|mean|josec.
DebiasStrategy ParseDebiasStrategy(std::string_view name);
const char* DebiasStrategyName(DebiasStrategy strategy);

struct DebiasPlan {
  DebiasStrategy strategy = DebiasStrategy::kSingle;
  // Sequential only; a permutation of the category names. Empty means the
  // order in which the specs were given.
  std::vector<std::string> category_order;
  // When unset, every vocabulary word outside all defining and equality sets
  // of the plan's categories is neutralized.
  std::optional<WordList> neutral_words;
  std::size_t k = 1;
  // Sequential only: build every subspace from the input embeddings instead
  // of recomputing each one on the partially debiased set.
  bool frozen_subspaces = false;
  SubspaceOptions subspace;
};

struct DebiasStep {
  std::string subspace_label;
  std::size_t k = 0;
  std::size_t neutralized = 0;
  std::size_t equalized = 0;
  std::optional<double> objective;
  bool degenerate_tie = false;
};

struct DebiasOutcome {
  EmbeddingSet embeddings;
  std::vector<DebiasStep> steps;
  std::vector<std::string> warnings;
  // Neutral words passed through because they lie in the bias subspace.
  std::size_t fully_contained = 0;
  // Equality sets skipped because a member's bias component equals the mean's.
  std::size_t degenerate_sets = 0;
  // Category subspaces that came out with fewer than K components.
  std::size_t rank_deficient = 0;
};

// sum_k <w, b_k> b_k over the subspace rows as stored.
Vector BiasComponent(const Vector& w, const BiasSubspace& subspace);

// (w - w_B) / |w - w_B|. Throws kFullyContained when |w - w_B| <= 1e-10.
Vector Neutralize(const Vector& w, const BiasSubspace& subspace);

// Equalizes the rows of `members` (one unit vector per equality-set word):
//
//   w' = (mu - mu_B) + sqrt(1 - |mu - mu_B|^2) (w_B - mu_B) / |w_B - mu_B|
//
// Throws kInvalidArgument for fewer than two rows, kRadicandNegative when
// |mu - mu_B| > 1 and kEqualizeDegenerate when some w_B equals mu_B.
RowMatrix EqualizeVectors(const RowMatrix& members, const BiasSubspace& subspace);

// Neutralizes the rows in `neutral` and equalizes each equality set against
// `subspace`; other rows are copied. Requires a normalized set, and `neutral`
// must not share a row with any equality set (kPlan).
DebiasOutcome HardDebias(const EmbeddingSet& set, const BiasSubspace& subspace,
                         const std::vector<std::size_t>& neutral,
                         const std::vector<std::vector<std::size_t>>& equality_sets);

// Runs `plan` over `specs` on a normalized embedding set.
DebiasOutcome Debias(const EmbeddingSet& set,
                     const std::vector<CategorySpec>& specs,
                     const DebiasPlan& plan);

DebiasOutcome SequentialDebias(const EmbeddingSet& set,
                               const std::vector<CategorySpec>& specs,
                               const DebiasPlan& plan);

// Every ordering of `names`, starting from the sorted one, in lexicographic
// order.
std::vector<std::vector<std::string>> AllOrders(std::vector<std::string> names);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_DEBIAS_H_
