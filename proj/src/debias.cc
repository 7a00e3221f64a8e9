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

#include "debias.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "error.h"

namespace mcdebias {
namespace {

constexpr double kContainedTolerance = 1e-10;

void RequireNormalized(const EmbeddingSet& set) {
  if (!set.normalized()) {
    throw Error(ErrorCode::kNotNormalized,
                "hard-debiasing requires normalized embeddings; normalize "
                "the input first");
  }
}

void CheckDim(std::size_t got, const BiasSubspace& subspace) {
  if (got != subspace.dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "vector has dimension " + std::to_string(got) +
                    ", subspace '" + subspace.label() + "' has " +
                    std::to_string(subspace.dim()));
  }
}

// Rows of `set` that belong to any defining or equality set of `specs`.
std::unordered_set<std::size_t> GenderedRows(
    const std::vector<ResolvedCategory>& categories) {
  std::unordered_set<std::size_t> rows;
  for (const ResolvedCategory& c : categories) {
    for (const auto& s : c.defining_sets) rows.insert(s.begin(), s.end());
    for (const auto& s : c.equality_sets) rows.insert(s.begin(), s.end());
  }
  return rows;
}

std::vector<std::size_t> NeutralRows(
    const EmbeddingSet& set, const std::vector<ResolvedCategory>& categories,
    const DebiasPlan& plan, std::vector<std::string>* warnings) {
  if (plan.neutral_words) {
    WordResolver resolver(set, plan.subspace.lowercase_fallback);
    WordList missing;
    std::vector<std::size_t> rows = resolver.ResolveAll(*plan.neutral_words, &missing);
    if (!missing.empty()) {
      warnings->push_back(std::to_string(missing.size()) +
                          " neutral words are not in the vocabulary");
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
  }
  const std::unordered_set<std::size_t> excluded = GenderedRows(categories);
  std::vector<std::size_t> rows;
  rows.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!excluded.count(i)) rows.push_back(i);
  }
  return rows;
}

std::vector<ResolvedCategory> ResolveAll(const std::vector<CategorySpec>& specs,
                                         const EmbeddingSet& set,
                                         bool lowercase_fallback) {
  std::vector<ResolvedCategory> out;
  out.reserve(specs.size());
  for (const CategorySpec& spec : specs) {
    out.push_back(ResolveCategory(spec, set, lowercase_fallback));
  }
  return out;
}

BiasSubspace BuildChecked(const CategorySpec& spec, const EmbeddingSet& set,
                          const DebiasPlan& plan, DebiasOutcome* outcome) {
  PcaResult pca = BuildBiasSubspace(spec, set, plan.k, plan.subspace);
  if (pca.rank_deficient) {
    ++outcome->rank_deficient;
    outcome->warnings.push_back("category '" + spec.name + "' yielded only " +
                        std::to_string(pca.subspace.k()) + " of K=" +
                        std::to_string(plan.k) + " components");
  }
  return std::move(pca.subspace);
}

void Absorb(DebiasOutcome* into, DebiasOutcome&& step) {
  into->embeddings = std::move(step.embeddings);
  for (DebiasStep& s : step.steps) into->steps.push_back(std::move(s));
  for (std::string& w : step.warnings) into->warnings.push_back(std::move(w));
  into->fully_contained += step.fully_contained;
  into->degenerate_sets += step.degenerate_sets;
  into->rank_deficient += step.rank_deficient;
}

}  // namespace

DebiasStrategy ParseDebiasStrategy(std::string_view name) {
  if (name == "single") return DebiasStrategy::kSingle;
  if (name == "seq" || name == "sequential") return DebiasStrategy::kSequential;
  if (name == "sum") return DebiasStrategy::kSum;
  if (name == "mean") return DebiasStrategy::kMean;
  if (name == "josec") return DebiasStrategy::kJosec;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown strategy '" + std::string(name) +
                  "' (expected single, seq, sum, mean or josec)");
}

const char* DebiasStrategyName(DebiasStrategy strategy) {
  switch (strategy) {
    case DebiasStrategy::kSingle: return "single";
    case DebiasStrategy::kSequential: return "seq";
    case DebiasStrategy::kSum: return "sum";
    case DebiasStrategy::kMean: return "mean";
    case DebiasStrategy::kJosec: return "josec";
  }
  return "unknown";
}

Vector BiasComponent(const Vector& w, const BiasSubspace& subspace) {
  CheckDim(static_cast<std::size_t>(w.size()), subspace);
  return subspace.components().transpose() * (subspace.components() * w);
}

Vector Neutralize(const Vector& w, const BiasSubspace& subspace) {
  Vector residual = w - BiasComponent(w, subspace);
  const double norm = residual.norm();
  if (norm <= kContainedTolerance) {
    throw Error(ErrorCode::kFullyContained,
                "vector lies in the span of subspace '" + subspace.label() + "'");
  }
  return residual / norm;
}

RowMatrix EqualizeVectors(const RowMatrix& members, const BiasSubspace& subspace) {
  if (members.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "an equality set needs at least two resolved words");
  }
  CheckDim(static_cast<std::size_t>(members.cols()), subspace);
  const RowMatrix& b = subspace.components();

  const Vector mu = members.colwise().mean().transpose();
  const Vector mu_b = b.transpose() * (b * mu);
  const Vector shared = mu - mu_b;
  const double shared_sq = shared.squaredNorm();
  if (shared_sq > 1.0 + 1e-12) {
    throw Error(ErrorCode::kRadicandNegative,
                "|mu - mu_B| exceeds 1; equality-set vectors are not unit length");
  }
  const double scale = std::sqrt(std::max(0.0, 1.0 - shared_sq));

  RowMatrix out(members.rows(), members.cols());
  for (Eigen::Index i = 0; i < members.rows(); ++i) {
    const Vector w = members.row(i).transpose();
    const Vector offset = b.transpose() * (b * w) - mu_b;
    const double offset_norm = offset.norm();
    if (offset_norm <= kContainedTolerance) {
      throw Error(ErrorCode::kEqualizeDegenerate,
                  "equality-set member " + std::to_string(i) +
                      " has the same bias component as the set mean");
    }
    out.row(i) = (shared + scale * offset / offset_norm).transpose();
  }
  return out;
}

DebiasOutcome HardDebias(const EmbeddingSet& set, const BiasSubspace& subspace,
                         const std::vector<std::size_t>& neutral,
                         const std::vector<std::vector<std::size_t>>& equality_sets) {
  RequireNormalized(set);
  CheckDim(set.dim(), subspace);

  std::unordered_set<std::size_t> equality_rows;
  for (const auto& e : equality_sets) equality_rows.insert(e.begin(), e.end());
  for (std::size_t row : neutral) {
    if (row >= set.size()) {
      throw Error(ErrorCode::kInvalidArgument, "neutral row index out of range");
    }
    if (equality_rows.count(row)) {
      throw Error(ErrorCode::kPlan, "word '" + set.word(row) +
                                        "' is both neutral and in an equality set");
    }
  }

  DebiasOutcome outcome{set, {}, {}, 0, 0, 0};
  DebiasStep step;
  step.subspace_label = subspace.label();
  step.k = subspace.k();

  RowMatrix m = set.matrix();
  const RowMatrix& b = subspace.components();

  for (std::size_t row : neutral) {
    const auto r = static_cast<Eigen::Index>(row);
    const Eigen::RowVectorXd w = m.row(r);
    const Eigen::RowVectorXd residual = w - (w * b.transpose()) * b;
    const double norm = residual.norm();
    if (norm <= kContainedTolerance) {
      ++outcome.fully_contained;
      outcome.warnings.push_back("'" + set.word(row) +
                                 "' lies in the bias subspace; left unchanged");
      continue;
    }
    m.row(r) = residual / norm;
    ++step.neutralized;
  }

  for (std::size_t e = 0; e < equality_sets.size(); ++e) {
    std::vector<std::size_t> members;
    for (std::size_t row : equality_sets[e]) {
      if (std::find(members.begin(), members.end(), row) == members.end()) {
        members.push_back(row);
      }
    }
    if (members.size() < 2) {
      outcome.warnings.push_back("equality set " + std::to_string(e) +
                                 " has fewer than two words in the vocabulary; skipped");
      continue;
    }
    RowMatrix vectors(static_cast<Eigen::Index>(members.size()), m.cols());
    for (std::size_t i = 0; i < members.size(); ++i) {
      vectors.row(static_cast<Eigen::Index>(i)) = set.row(members[i]);
    }
    try {
      const RowMatrix equalized = EqualizeVectors(vectors, subspace);
      for (std::size_t i = 0; i < members.size(); ++i) {
        m.row(static_cast<Eigen::Index>(members[i])) =
            equalized.row(static_cast<Eigen::Index>(i));
      }
      step.equalized += members.size();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kEqualizeDegenerate) throw;
      ++outcome.degenerate_sets;
      outcome.warnings.push_back("equality set " + std::to_string(e) + " skipped: " +
                                 err.what());
    }
  }

  const bool unit = subspace.orthonormal();
  outcome.embeddings = set.WithMatrix(std::move(m), unit);
  if (!unit) {
    // Non-orthonormal composed rows do not guarantee unit outputs.
    outcome.embeddings = Normalize(outcome.embeddings);
  }
  outcome.steps.push_back(step);
  return outcome;
}

DebiasOutcome SequentialDebias(const EmbeddingSet& set,
                               const std::vector<CategorySpec>& specs,
                               const DebiasPlan& plan) {
  RequireNormalized(set);
  if (specs.empty()) throw Error(ErrorCode::kPlan, "no categories to debias");

  std::vector<std::string> order = plan.category_order;
  if (order.empty()) {
    for (const CategorySpec& s : specs) order.push_back(s.name);
  }
  std::vector<std::string> names;
  for (const CategorySpec& s : specs) names.push_back(s.name);
  {
    std::vector<std::string> a = order;
    std::vector<std::string> b = names;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b || std::adjacent_find(b.begin(), b.end()) != b.end()) {
      throw Error(ErrorCode::kPlan,
                  "sequential order must be a permutation of the distinct "
                  "category names");
    }
  }

  DebiasOutcome outcome{set, {}, {}, 0, 0, 0};
  const std::vector<ResolvedCategory> resolved =
      ResolveAll(specs, set, plan.subspace.lowercase_fallback);
  const std::vector<std::size_t> neutral =
      NeutralRows(set, resolved, plan, &outcome.warnings);

  std::vector<BiasSubspace> frozen;
  if (plan.frozen_subspaces) {
    for (const CategorySpec& spec : specs) {
      frozen.push_back(BuildChecked(spec, set, plan, &outcome));
    }
  }

  for (const std::string& name : order) {
    const auto pos = static_cast<std::size_t>(
        std::find(names.begin(), names.end(), name) - names.begin());
    const BiasSubspace subspace =
        plan.frozen_subspaces
            ? frozen[pos]
            : BuildChecked(specs[pos], outcome.embeddings, plan, &outcome);
    Absorb(&outcome, HardDebias(outcome.embeddings, subspace, neutral,
                                resolved[pos].equality_sets));
  }
  return outcome;
}

DebiasOutcome Debias(const EmbeddingSet& set,
                     const std::vector<CategorySpec>& specs,
                     const DebiasPlan& plan) {
  RequireNormalized(set);
  if (specs.empty()) throw Error(ErrorCode::kPlan, "no categories to debias");

  if (plan.strategy == DebiasStrategy::kSequential) {
    return SequentialDebias(set, specs, plan);
  }
  if (!plan.category_order.empty()) {
    throw Error(ErrorCode::kPlan, "a category order only applies to seq");
  }

  DebiasOutcome outcome{set, {}, {}, 0, 0, 0};
  const std::vector<ResolvedCategory> resolved =
      ResolveAll(specs, set, plan.subspace.lowercase_fallback);
  const std::vector<std::size_t> neutral =
      NeutralRows(set, resolved, plan, &outcome.warnings);

  if (plan.strategy == DebiasStrategy::kSingle) {
    if (specs.size() != 1) {
      throw Error(ErrorCode::kPlan, "strategy single takes exactly one category");
    }
    const BiasSubspace subspace = BuildChecked(specs[0], set, plan, &outcome);
    Absorb(&outcome, HardDebias(set, subspace, neutral, resolved[0].equality_sets));
    return outcome;
  }

  std::vector<BiasSubspace> individual;
  std::vector<std::vector<std::size_t>> equality_sets;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    individual.push_back(BuildChecked(specs[i], set, plan, &outcome));
    equality_sets.insert(equality_sets.end(), resolved[i].equality_sets.begin(),
                         resolved[i].equality_sets.end());
  }
  const CompositionStrategy composition =
      plan.strategy == DebiasStrategy::kSum    ? CompositionStrategy::kSum
      : plan.strategy == DebiasStrategy::kMean ? CompositionStrategy::kMean
                                               : CompositionStrategy::kJosec;
  if (composition != CompositionStrategy::kJosec) {
    for (const BiasSubspace& s : individual) {
      if (s.k() != individual.front().k()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "SUM/MEAN need equal K; category '" + s.label() +
                        "' is rank deficient");
      }
    }
  }
  CompositionResult composed = Compose(composition, individual);
  if (composed.degenerate_tie) {
    outcome.warnings.push_back("JoSEC direction is not unique (singular value tie)");
  }
  DebiasOutcome step = HardDebias(set, composed.subspace, neutral, equality_sets);
  step.steps.back().objective = composed.objective;
  step.steps.back().degenerate_tie = composed.degenerate_tie;
  Absorb(&outcome, std::move(step));
  return outcome;
}

std::vector<std::vector<std::string>> AllOrders(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  std::vector<std::vector<std::string>> orders;
  do {
    orders.push_back(names);
  } while (std::next_permutation(names.begin(), names.end()));
  return orders;
}

}  // namespace mcdebias
