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

#include "eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "error.h"

namespace mcdebias {
namespace {

RowMatrix RowsOf(const EmbeddingSet& set, const std::vector<std::size_t>& rows) {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(set.dim()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = set.row(rows[i]);
  }
  return out;
}

RowMatrix UnitRows(const RowMatrix& m) {
  RowMatrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroVector,
                  "zero vector in cosine distance (row " + std::to_string(i) + ")");
    }
    out.row(i) /= norm;
  }
  return out;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double MeanCosDistance(const Vector& target, const RowMatrix& attributes) {
  if (attributes.rows() == 0) {
    throw Error(ErrorCode::kEmptyAttributeSet, "attribute set is empty");
  }
  if (attributes.cols() != target.size()) {
    throw Error(ErrorCode::kShapeMismatch, "target and attribute dimensions differ");
  }
  const double target_norm = target.norm();
  if (target_norm == 0.0) {
    throw Error(ErrorCode::kZeroVector, "zero target vector");
  }
  const RowMatrix unit = UnitRows(attributes);
  const Vector cosines = unit * (target / target_norm);
  return (1.0 - cosines.array()).mean();
}

MacReport Mac(const RowMatrix& targets,
              const std::vector<RowMatrix>& attribute_sets) {
  if (targets.rows() == 0) {
    throw Error(ErrorCode::kEmptySet, "MAC needs at least one target vector");
  }
  if (attribute_sets.empty()) {
    throw Error(ErrorCode::kEmptyAttributeSet, "MAC needs at least one attribute set");
  }
  Eigen::Index total = 0;
  for (const RowMatrix& a : attribute_sets) {
    if (a.rows() == 0) {
      throw Error(ErrorCode::kEmptyAttributeSet, "attribute set is empty");
    }
    if (a.cols() != targets.cols()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "target and attribute dimensions differ");
    }
    total += a.rows();
  }
  RowMatrix attributes(total, targets.cols());
  Eigen::Index r = 0;
  for (const RowMatrix& a : attribute_sets) {
    attributes.middleRows(r, a.rows()) = a;
    r += a.rows();
  }

  const Eigen::MatrixXd distances =
      1.0 - (UnitRows(targets) * UnitRows(attributes).transpose()).array();

  MacReport report;
  report.table.resize(targets.rows(), static_cast<Eigen::Index>(attribute_sets.size()));
  Eigen::Index col = 0;
  for (std::size_t j = 0; j < attribute_sets.size(); ++j) {
    const Eigen::Index n = attribute_sets[j].rows();
    report.table.col(static_cast<Eigen::Index>(j)) =
        distances.middleCols(col, n).rowwise().mean();
    col += n;
  }
  report.mac = report.table.mean();
  return report;
}

MacReport MacForCategory(const CategorySpec& spec, const EmbeddingSet& set,
                         bool lowercase_fallback) {
  WordResolver resolver(set, lowercase_fallback);
  std::vector<std::size_t> targets;
  std::vector<std::string> target_labels;
  std::vector<std::string> warnings;
  std::size_t missing_targets = 0;
  for (const WordList& list : spec.target_words) {
    for (const std::string& w : list) {
      auto row = resolver.Resolve(w);
      if (!row) {
        ++missing_targets;
        continue;
      }
      if (std::find(targets.begin(), targets.end(), *row) != targets.end()) continue;
      targets.push_back(*row);
      target_labels.push_back(w);
    }
  }
  if (missing_targets > 0) {
    warnings.push_back(std::to_string(missing_targets) +
                       " target words are not in the vocabulary");
  }
  if (targets.empty()) {
    throw Error(ErrorCode::kEmptySet,
                "category '" + spec.name + "' has no target words in the vocabulary");
  }

  std::vector<RowMatrix> attributes;
  std::vector<std::string> attribute_labels;
  for (std::size_t j = 0; j < spec.attribute_sets.size(); ++j) {
    WordList missing;
    std::vector<std::size_t> rows = resolver.ResolveAll(spec.attribute_sets[j], &missing);
    if (rows.empty()) {
      warnings.push_back("attribute set " + std::to_string(j) +
                         " has no words in the vocabulary; skipped");
      continue;
    }
    if (!missing.empty()) {
      warnings.push_back("attribute set " + std::to_string(j) + ": " +
                         std::to_string(missing.size()) + " words missing");
    }
    attributes.push_back(RowsOf(set, rows));
    attribute_labels.push_back("A" + std::to_string(j));
  }
  if (attributes.empty()) {
    throw Error(ErrorCode::kEmptyAttributeSet,
                "category '" + spec.name + "' has no usable attribute sets");
  }

  MacReport report = Mac(RowsOf(set, targets), attributes);
  report.category = spec.name;
  report.target_labels = std::move(target_labels);
  report.attribute_labels = std::move(attribute_labels);
  report.warnings = std::move(warnings);
  return report;
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTCdf(double t, double df) {
  if (df <= 0.0) throw Error(ErrorCode::kInvalidArgument, "df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * RegularizedIncompleteBeta(0.5 * df, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

TTestResult PairedTTest(std::span<const double> before,
                        std::span<const double> after) {
  if (before.size() != after.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "paired samples differ in length (" + std::to_string(before.size()) +
                    " vs " + std::to_string(after.size()) + ")");
  }
  const std::size_t n = before.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "paired t-test needs n >= 2");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += after[i] - before[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = (after[i] - before[i]) - mean;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult result;
  result.df = n - 1;
  if (sd <= 1e-12 * std::abs(mean) || sd == 0.0) {
    result.zero_variance = true;
    if (mean == 0.0) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = mean > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }
  result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double x = static_cast<double>(result.df) /
                   (static_cast<double>(result.df) + result.t * result.t);
  result.p = std::min(
      1.0, RegularizedIncompleteBeta(0.5 * static_cast<double>(result.df), 0.5, x));
  return result;
}

std::optional<double> GroupOutcome::fpr() const {
  if (fp + tn == 0) return std::nullopt;
  return static_cast<double>(fp) / static_cast<double>(fp + tn);
}

std::optional<double> GroupOutcome::fnr() const {
  if (fn + tp == 0) return std::nullopt;
  return static_cast<double>(fn) / static_cast<double>(fn + tp);
}

EqualityDifferences ComputeEqualityDifferences(
    const std::vector<GroupOutcome>& groups, const GroupOutcome& overall) {
  const auto overall_fpr = overall.fpr();
  const auto overall_fnr = overall.fnr();
  if (!overall_fpr || !overall_fnr) {
    throw Error(ErrorCode::kInvalidArgument,
                "overall FPR and FNR must be defined (FP+TN > 0 and FN+TP > 0)");
  }
  EqualityDifferences out;
  for (const GroupOutcome& g : groups) {
    if (auto rate = g.fpr()) {
      out.fped += std::abs(*overall_fpr - *rate);
      ++out.fpr_groups;
    } else {
      out.warnings.push_back("group '" + g.label + "' has FP+TN = 0; skipped in FPED");
    }
    if (auto rate = g.fnr()) {
      out.fned += std::abs(*overall_fnr - *rate);
      ++out.fnr_groups;
    } else {
      out.warnings.push_back("group '" + g.label + "' has FN+TP = 0; skipped in FNED");
    }
  }
  if (out.fpr_groups == 0 && out.fnr_groups == 0) {
    throw Error(ErrorCode::kNoValidGroups, "no group has a defined FPR or FNR");
  }
  return out;
}

}  // namespace mcdebias
