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

#ifndef MCDEBIAS_SRC_EVAL_H_
#define MCDEBIAS_SRC_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embeddings.h"
#include "types.h"
#include "wordsets.h"

namespace mcdebias {

// (1/|A|) sum_a (1 - cos(s, a)). Throws kEmptyAttributeSet for an empty A and
// kZeroVector for any zero vector.
double MeanCosDistance(const Vector& target, const RowMatrix& attributes);

struct MacReport {
  std::string category;
  double mac = 0.0;
  // table(i, j) = MeanCosDistance(target i, attribute set j).
  Eigen::MatrixXd table;
  std::vector<std::string> target_labels;
  std::vector<std::string> attribute_labels;
  std::vector<std::string> warnings;

  std::size_t sample_count() const {
    return static_cast<std::size_t>(table.size());
  }
};

// Grand mean of the target x attribute-set distance table.
MacReport Mac(const RowMatrix& targets,
              const std::vector<RowMatrix>& attribute_sets);

// MAC of a category's target words (all target lists flattened, duplicates
// dropped) against its attribute sets. Attribute sets with no word in the
// vocabulary are skipped with a warning.
MacReport MacForCategory(const CategorySpec& spec, const EmbeddingSet& set,
                         bool lowercase_fallback);

// Regularized incomplete beta function I_x(a, b).
double RegularizedIncompleteBeta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom.
double StudentTCdf(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
  // Differences have no spread. A zero mean gives (0, 1); otherwise t is
  // +/-infinity and p is 0.
  bool zero_variance = false;
};

// Two-tailed paired t-test on after - before.
TTestResult PairedTTest(std::span<const double> before,
                        std::span<const double> after);

struct GroupOutcome {
  std::string label;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::optional<double> fpr() const;
  std::optional<double> fnr() const;
};

struct EqualityDifferences {
  double fped = 0.0;
  double fned = 0.0;
  std::size_t fpr_groups = 0;
  std::size_t fnr_groups = 0;
  std::vector<std::string> warnings;

  double total() const { return fped + fned; }
};

// FPED = sum_i |FPR - FPR_i|, FNED likewise. Groups whose rate is undefined
// are left out of that sum with a warning.
EqualityDifferences ComputeEqualityDifferences(
    const std::vector<GroupOutcome>& groups, const GroupOutcome& overall);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_EVAL_H_
