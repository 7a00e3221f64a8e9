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

#include "compose.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "error.h"

namespace mcdebias {
namespace {

constexpr double kUnitTolerance = 1e-10;

void CheckUnit(const Vector& u, std::size_t dim) {
  if (static_cast<std::size_t>(u.size()) != dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "vector has dimension " + std::to_string(u.size()) +
                    ", subspace has " + std::to_string(dim));
  }
  if (std::abs(u.norm() - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kNotUnit, "direction vector is not unit length");
  }
}

void CheckOrthonormal(const BiasSubspace& s) {
  if (!s.orthonormal()) {
    throw Error(ErrorCode::kNotOrthonormal,
                "subspace '" + s.label() + "' is not orthonormal");
  }
}

void CheckSameShape(const std::vector<BiasSubspace>& subspaces, bool same_k) {
  if (subspaces.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no subspaces to compose");
  }
  for (const BiasSubspace& s : subspaces) {
    if (s.dim() != subspaces.front().dim() ||
        (same_k && s.k() != subspaces.front().k())) {
      throw Error(ErrorCode::kShapeMismatch,
                  "subspace '" + s.label() + "' is " + std::to_string(s.k()) +
                      "x" + std::to_string(s.dim()) + ", expected " +
                      std::to_string(subspaces.front().k()) + "x" +
                      std::to_string(subspaces.front().dim()));
    }
  }
}

BiasSubspace LinearComposition(const std::vector<BiasSubspace>& subspaces,
                               double scale, const char* label) {
  CheckSameShape(subspaces, /*same_k=*/true);
  RowMatrix sum = RowMatrix::Zero(subspaces.front().components().rows(),
                                  subspaces.front().components().cols());
  for (const BiasSubspace& s : subspaces) sum += s.components();
  sum *= scale;
  for (Eigen::Index i = 0; i < sum.rows(); ++i) {
    const double norm = sum.row(i).norm();
    if (norm < 1e-12) {
      throw Error(ErrorCode::kZeroRow,
                  std::string(label) + " row " + std::to_string(i) +
                      " cancels to zero");
    }
    sum.row(i) /= norm;
  }
  return BiasSubspace(label, std::move(sum));
}

}  // namespace

const char* CompositionStrategyName(CompositionStrategy strategy) {
  switch (strategy) {
    case CompositionStrategy::kSum: return "SUM";
    case CompositionStrategy::kMean: return "MEAN";
    case CompositionStrategy::kJosec: return "JOSEC";
  }
  return "UNKNOWN";
}

BiasSubspace SubspaceSum(const std::vector<BiasSubspace>& subspaces) {
  return LinearComposition(subspaces, 1.0, "SUM");
}

BiasSubspace SubspaceMean(const std::vector<BiasSubspace>& subspaces) {
  return LinearComposition(
      subspaces, 1.0 / static_cast<double>(std::max<std::size_t>(subspaces.size(), 1)),
      "MEAN");
}

double DistanceToSubspace(const Vector& u, const BiasSubspace& subspace) {
  CheckUnit(u, subspace.dim());
  CheckOrthonormal(subspace);
  const double captured = (subspace.components() * u).squaredNorm();
  return std::sqrt(std::clamp(1.0 - captured, 0.0, 1.0));
}

double JosecObjective(const Vector& u,
                      const std::vector<BiasSubspace>& subspaces) {
  double total = 0.0;
  for (const BiasSubspace& s : subspaces) {
    CheckUnit(u, s.dim());
    CheckOrthonormal(s);
    total += (s.components() * u).squaredNorm();
  }
  return total;
}

CompositionResult JosecDirection(const std::vector<BiasSubspace>& subspaces) {
  CheckSameShape(subspaces, /*same_k=*/false);
  Eigen::Index rows = 0;
  for (const BiasSubspace& s : subspaces) {
    CheckOrthonormal(s);
    rows += static_cast<Eigen::Index>(s.k());
  }
  const auto d = static_cast<Eigen::Index>(subspaces.front().dim());
  Eigen::MatrixXd stacked(rows, d);
  Eigen::Index r = 0;
  for (const BiasSubspace& s : subspaces) {
    stacked.middleRows(r, s.components().rows()) = s.components();
    r += s.components().rows();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  Vector u = svd.matrixV().col(0);
  u.normalize();
  ApplySignConvention(u);

  bool tie = false;
  if (sigma.size() > 1 && sigma(0) > 0) {
    tie = (sigma(0) - sigma(1)) / sigma(0) < 1e-9;
  }

  CompositionResult result{BiasSubspace("JOSEC", u.transpose()),
                           CompositionStrategy::kJosec, std::nullopt, {}, tie};
  result.objective = JosecObjective(u, subspaces);
  for (const BiasSubspace& s : subspaces) {
    result.per_category_distance.push_back(DistanceToSubspace(u, s));
  }
  return result;
}

CompositionResult Compose(CompositionStrategy strategy,
                          const std::vector<BiasSubspace>& subspaces) {
  switch (strategy) {
    case CompositionStrategy::kSum:
      return {SubspaceSum(subspaces), strategy, std::nullopt, {}, false};
    case CompositionStrategy::kMean:
      return {SubspaceMean(subspaces), strategy, std::nullopt, {}, false};
    case CompositionStrategy::kJosec:
      return JosecDirection(subspaces);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown composition strategy");
}

double DirectionSubspaceCosine(const Vector& u, const BiasSubspace& subspace) {
  CheckUnit(u, subspace.dim());
  return std::clamp(subspace.components().row(0).dot(u), -1.0, 1.0);
}

RowMatrix ProjectTo3d(const RowMatrix& points) {
  RowMatrix out = RowMatrix::Zero(points.rows(), 3);
  if (points.rows() == 0) return out;
  Eigen::MatrixXd centered = points;
  centered.rowwise() -= centered.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double tol = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
  for (Eigen::Index axis = 0; axis < std::min<Eigen::Index>(3, sigma.size());
       ++axis) {
    if (sigma(axis) <= tol) break;
    Vector v = svd.matrixV().col(axis);
    ApplySignConvention(v);
    out.col(axis) = centered * v;
  }
  return out;
}

HypothesisReport ValidateHypothesis(const std::vector<CategorySpec>& specs,
                                    const CategorySpec& ground_truth,
                                    const EmbeddingSet& set,
                                    const HypothesisOptions& options) {
  if (specs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "hypothesis validation needs at least one category");
  }
  HypothesisReport report;
  report.k = options.k;
  report.seed = options.seed;

  std::vector<BiasSubspace> individual;
  for (const CategorySpec& spec : specs) {
    PcaResult pca = BuildBiasSubspace(spec, set, options.k, options.subspace);
    if (pca.rank_deficient) {
      report.warnings.push_back("category '" + spec.name + "' yielded only " +
                                std::to_string(pca.subspace.k()) +
                                " of K=" + std::to_string(options.k) +
                                " components");
    }
    individual.push_back(std::move(pca.subspace));
  }
  PcaResult truth_pca =
      BuildBiasSubspace(ground_truth, set, options.k, options.subspace);
  if (truth_pca.rank_deficient) {
    report.warnings.push_back("ground truth yielded only " +
                              std::to_string(truth_pca.subspace.k()) +
                              " of K=" + std::to_string(options.k) +
                              " components");
  }
  const BiasSubspace truth = truth_pca.subspace.WithLabel("GROUND_TRUTH");
  report.ground_truth_label = ground_truth.name;

  for (const BiasSubspace& s : individual) {
    report.individual.push_back(
        {s.label(), DirectionSubspaceCosine(s.component(0), truth)});
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(set.dim());
  double sum = 0.0;
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < options.random_vectors; ++i) {
    Vector r(d);
    do {
      for (Eigen::Index j = 0; j < d; ++j) r(j) = normal(rng);
    } while (r.norm() < 1e-12);
    r.normalize();
    const double c = DirectionSubspaceCosine(r, truth);
    report.random_cosines.push_back(c);
    sum += c;
    sum_abs += std::abs(c);
  }
  if (options.random_vectors > 0) {
    report.random_mean = sum / static_cast<double>(options.random_vectors);
    report.random_mean_abs = sum_abs / static_cast<double>(options.random_vectors);
  }

  CompositionResult josec = JosecDirection(individual);
  const Vector u = josec.subspace.component(0);
  report.josec_cosine = DirectionSubspaceCosine(u, truth);
  report.josec_objective = *josec.objective;
  report.josec_degenerate_tie = josec.degenerate_tie;
  if (josec.degenerate_tie) {
    report.warnings.push_back("JoSEC direction is not unique (singular value tie)");
  }

  std::vector<const BiasSubspace*> all;
  for (const BiasSubspace& s : individual) all.push_back(&s);
  all.push_back(&truth);
  all.push_back(&josec.subspace);
  Eigen::Index total = 0;
  for (const BiasSubspace* s : all) total += static_cast<Eigen::Index>(s->k());
  RowMatrix points(total, d);
  Eigen::Index r = 0;
  for (const BiasSubspace* s : all) {
    points.middleRows(r, s->components().rows()) = s->components();
    r += s->components().rows();
  }
  const RowMatrix projected = ProjectTo3d(points);
  r = 0;
  for (const BiasSubspace* s : all) {
    for (std::size_t j = 0; j < s->k(); ++j, ++r) {
      report.projection.push_back({s->label(), j, projected(r, 0),
                                   projected(r, 1), projected(r, 2)});
    }
  }
  return report;
}

}  // namespace mcdebias
