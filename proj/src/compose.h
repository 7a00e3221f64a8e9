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

#ifndef MCDEBIAS_SRC_COMPOSE_H_
#define MCDEBIAS_SRC_COMPOSE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subspace.h"
#include "types.h"

namespace mcdebias {

enum class CompositionStrategy { kSum, kMean, kJosec };

const char* CompositionStrategyName(CompositionStrategy strategy);

struct CompositionResult {
  BiasSubspace subspace;
  CompositionStrategy strategy;
  // JoSEC only: objective at the returned direction and its distance to each
  // input subspace, in input order.
  std::optional<double> objective;
  std::vector<double> per_category_distance;
  // JoSEC only: the top two singular values of the stacked components agree
  // to 1e-9 relative, so the direction is not unique.
  bool degenerate_tie = false;
};

// Entrywise sum of component matrices with each row rescaled to unit length.
// Rows are not re-orthogonalized. Label "SUM".
BiasSubspace SubspaceSum(const std::vector<BiasSubspace>& subspaces);

// As SubspaceSum after division by N. Label "MEAN".
BiasSubspace SubspaceMean(const std::vector<BiasSubspace>& subspaces);

// sqrt(1 - sum_k (u . v_k)^2), clamped to [0, 1]. `u` must be unit length
// within 1e-10 (kNotUnit) and `subspace` orthonormal (kNotOrthonormal).
double DistanceToSubspace(const Vector& u, const BiasSubspace& subspace);

// sum_i sum_k (u . v_ik)^2 over every component of every subspace.
double JosecObjective(const Vector& u,
                      const std::vector<BiasSubspace>& subspaces);

// Unit direction maximizing JosecObjective: the dominant right singular vector
// of all components stacked as rows (no centering). Label "JOSEC".
CompositionResult JosecDirection(const std::vector<BiasSubspace>& subspaces);

CompositionResult Compose(CompositionStrategy strategy,
                          const std::vector<BiasSubspace>& subspaces);

// Signed cosine between `u` and the first component of `subspace`.
double DirectionSubspaceCosine(const Vector& u, const BiasSubspace& subspace);

struct CosineEntry {
  std::string label;
  double cosine = 0.0;
};

struct ProjectionPoint {
  std::string label;
  std::size_t component_index = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct HypothesisReport {
  std::string ground_truth_label;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  // One entry per individual category (first component vs ground truth).
  std::vector<CosineEntry> individual;
  std::vector<double> random_cosines;
  double random_mean = 0.0;
  double random_mean_abs = 0.0;
  double josec_cosine = 0.0;
  double josec_objective = 0.0;
  bool josec_degenerate_tie = false;
  // Every component of every subspace (individual, ground truth, JoSEC)
  // projected onto the top three principal axes of the stacked components.
  std::vector<ProjectionPoint> projection;
  std::vector<std::string> warnings;
};

struct HypothesisOptions {
  std::size_t k = 1;
  std::uint64_t seed = 42;
  std::size_t random_vectors = 10;
  SubspaceOptions subspace;
};

// Compares individual subspaces, random unit vectors and the JoSEC direction
// against the subspace built from the intersectional ground-truth spec.
HypothesisReport ValidateHypothesis(const std::vector<CategorySpec>& specs,
                                    const CategorySpec& ground_truth,
                                    const EmbeddingSet& set,
                                    const HypothesisOptions& options);

// Rows of `points` projected onto their top three centered principal axes;
// missing axes (rank < 3) project to zero.
RowMatrix ProjectTo3d(const RowMatrix& points);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_COMPOSE_H_
