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

#ifndef MCDEBIAS_SRC_SUBSPACE_H_
#define MCDEBIAS_SRC_SUBSPACE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "embeddings.h"
#include "types.h"
#include "wordsets.h"

namespace mcdebias {

// K direction vectors in R^d, stored as the rows of a K x d matrix.
//
// Subspaces produced by PCA or JoSEC are orthonormal. SUM/MEAN compositions
// only have unit rows; orthonormal() reports which case applies.
class BiasSubspace {
 public:
  // `label` must be nonempty without whitespace (it is the first token of the
  // serialized header). `explained_variance` is either empty or has K entries.
  BiasSubspace(std::string label, RowMatrix components,
               std::vector<double> explained_variance = {});

  const std::string& label() const { return label_; }
  std::size_t k() const { return static_cast<std::size_t>(components_.rows()); }
  std::size_t dim() const {
    return static_cast<std::size_t>(components_.cols());
  }
  const RowMatrix& components() const { return components_; }
  Vector component(std::size_t j) const {
    return components_.row(static_cast<Eigen::Index>(j)).transpose();
  }
  const std::vector<double>& explained_variance() const {
    return explained_variance_;
  }
  // |<b_j, b_k> - delta_jk| < 1e-8 for all j, k.
  bool orthonormal() const { return orthonormal_; }

  BiasSubspace WithLabel(std::string label) const;

 private:
  std::string label_;
  RowMatrix components_;
  std::vector<double> explained_variance_;
  bool orthonormal_ = false;
};

// Flips `v` so that its largest-magnitude coordinate is positive (first such
// coordinate on ties).
void ApplySignConvention(Eigen::Ref<Vector> v);

// One row w - mu_i per resolved word of each defining set D_i, sets in spec
// order.
RowMatrix CenteredDifferences(const ResolvedCategory& category,
                              const EmbeddingSet& set);

struct PcaResult {
  BiasSubspace subspace;
  std::size_t requested_k = 0;
  // Fewer than requested_k nonzero singular values; subspace holds the
  // achievable number of components.
  bool rank_deficient = false;
};

// Top-K right singular directions of `m`. The rows are not re-centered unless
// `double_center` is set, in which case the global row mean is removed first.
// Explained variance is sigma^2 / max(m - 1, 1).
PcaResult PrincipalComponents(const RowMatrix& m, std::size_t k,
                              bool double_center = false,
                              std::string label = "PCA");

struct SubspaceOptions {
  bool double_center = false;
  bool lowercase_fallback = false;
};

// Requires a normalized embedding set.
PcaResult BuildBiasSubspace(const CategorySpec& spec, const EmbeddingSet& set,
                            std::size_t k, const SubspaceOptions& options = {});

// Text form: header "label K d", then K rows of d values at 17 significant
// digits.
std::string SerializeSubspace(const BiasSubspace& subspace);
BiasSubspace ParseSubspace(std::string_view text);
void SaveSubspace(const BiasSubspace& subspace, const std::string& path);
BiasSubspace LoadSubspace(const std::string& path);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_SUBSPACE_H_
