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

#include "subspace.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <utility>

#include "error.h"

namespace mcdebias {

BiasSubspace::BiasSubspace(std::string label, RowMatrix components,
                           std::vector<double> explained_variance)
    : label_(std::move(label)),
      components_(std::move(components)),
      explained_variance_(std::move(explained_variance)) {
  if (label_.empty() ||
      label_.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "subspace label must be nonempty and contain no whitespace: '" +
                    label_ + "'");
  }
  if (components_.rows() == 0 || components_.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "subspace must have K >= 1, d >= 1");
  }
  if (components_.rows() > components_.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "subspace has K > d");
  }
  if (!components_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "subspace has non-finite entries");
  }
  if (!explained_variance_.empty() &&
      explained_variance_.size() != static_cast<std::size_t>(components_.rows())) {
    throw Error(ErrorCode::kInvalidArgument,
                "explained variance must have one entry per component");
  }
  const RowMatrix gram = components_ * components_.transpose();
  orthonormal_ =
      (gram - RowMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
      1e-8;
}

BiasSubspace BiasSubspace::WithLabel(std::string label) const {
  return BiasSubspace(std::move(label), components_, explained_variance_);
}

void ApplySignConvention(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0) v = -v;
}

RowMatrix CenteredDifferences(const ResolvedCategory& category,
                              const EmbeddingSet& set) {
  std::size_t rows = 0;
  for (std::size_t i = 0; i < category.defining_sets.size(); ++i) {
    if (category.defining_sets[i].empty()) {
      throw Error(ErrorCode::kFatalValidation,
                  "category '" + category.name + "': defining set " +
                      std::to_string(i) + " is empty");
    }
    rows += category.defining_sets[i].size();
  }
  const auto d = static_cast<Eigen::Index>(set.dim());
  RowMatrix out(static_cast<Eigen::Index>(rows), d);
  Eigen::Index r = 0;
  for (const auto& members : category.defining_sets) {
    Vector mean = Vector::Zero(d);
    for (std::size_t idx : members) mean += set.row(idx).transpose();
    mean /= static_cast<double>(members.size());
    for (std::size_t idx : members) {
      out.row(r++) = set.row(idx) - mean.transpose();
    }
  }
  return out;
}

PcaResult PrincipalComponents(const RowMatrix& m, std::size_t k,
                              bool double_center, std::string label) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  if (k < 1 || k > std::min(rows, cols)) {
    throw Error(ErrorCode::kInvalidArgument,
                "K=" + std::to_string(k) + " outside [1, min(m=" +
                    std::to_string(rows) + ", d=" + std::to_string(cols) + ")]");
  }
  RowMatrix data = m;
  if (double_center) data.rowwise() -= data.colwise().mean();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(data), Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * sigma_max;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(sigma.size()) &&
         sigma(static_cast<Eigen::Index>(rank)) > tol && sigma_max > 0) {
    ++rank;
  }
  if (rank == 0) {
    throw Error(ErrorCode::kRankDeficient,
                "difference matrix is all zero; no bias direction exists");
  }

  const std::size_t kept = std::min(k, rank);
  const double denom = static_cast<double>(std::max<std::size_t>(rows, 2) - 1);
  RowMatrix components(static_cast<Eigen::Index>(kept), data.cols());
  std::vector<double> variance(kept);
  for (std::size_t j = 0; j < kept; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    Vector v = svd.matrixV().col(jj);
    ApplySignConvention(v);
    components.row(jj) = v.transpose();
    variance[j] = sigma(jj) * sigma(jj) / denom;
  }
  return PcaResult{
      BiasSubspace(std::move(label), std::move(components), std::move(variance)),
      k, kept < k};
}

PcaResult BuildBiasSubspace(const CategorySpec& spec, const EmbeddingSet& set,
                            std::size_t k, const SubspaceOptions& options) {
  if (!set.normalized()) {
    throw Error(ErrorCode::kNotNormalized,
                "bias subspaces are built from normalized embeddings");
  }
  const ResolvedCategory resolved =
      ResolveCategory(spec, set, options.lowercase_fallback);
  std::string label = spec.name;
  for (char& c : label) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') c = '_';
  }
  return PrincipalComponents(CenteredDifferences(resolved, set), k,
                             options.double_center, std::move(label));
}

std::string SerializeSubspace(const BiasSubspace& subspace) {
  std::string out = subspace.label() + " " + std::to_string(subspace.k()) + " " +
                    std::to_string(subspace.dim()) + "\n";
  char number[40];
  const RowMatrix& c = subspace.components();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      std::snprintf(number, sizeof(number), "%.17g", c(i, j));
      if (j > 0) out += ' ';
      out += number;
    }
    out += '\n';
  }
  return out;
}

BiasSubspace ParseSubspace(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string label;
  long long k = 0;
  long long d = 0;
  if (!(in >> label >> k >> d) || k < 1 || d < 1) {
    throw Error(ErrorCode::kMalformedLine,
                "subspace header must be 'label K d' with K, d >= 1");
  }
  RowMatrix components(k, d);
  for (long long i = 0; i < k; ++i) {
    for (long long j = 0; j < d; ++j) {
      if (!(in >> components(i, j))) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "subspace file ended before " + std::to_string(k) + "x" +
                        std::to_string(d) + " values were read");
      }
    }
  }
  std::string extra;
  if (in >> extra) {
    throw Error(ErrorCode::kDimensionMismatch,
                "subspace file has values beyond the declared K x d");
  }
  return BiasSubspace(std::move(label), std::move(components));
}

void SaveSubspace(const BiasSubspace& subspace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << SerializeSubspace(subspace);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

BiasSubspace LoadSubspace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseSubspace(text);
}

}  // namespace mcdebias
