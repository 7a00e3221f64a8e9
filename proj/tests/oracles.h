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

// Independent reference implementations used to check the library. They
// avoid the library's numerical paths: plain loops, a Gram-matrix
// eigensolver instead of SVD, exhaustive search instead of closed forms.

#ifndef MCDEBIAS_TESTS_ORACLES_H_
#define MCDEBIAS_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "types.h"

namespace mcdebias::oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline Mat ToMat(const RowMatrix& m) {
  Mat out(static_cast<std::size_t>(m.rows()), Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm(const Vec& a) { return std::sqrt(Dot(a, a)); }

// Top-k eigenpairs of the Gram matrix M^T M, eigenvalues descending.
struct GramEigen {
  std::vector<Vector> vectors;
  std::vector<double> values;
};

inline GramEigen GramTopK(const RowMatrix& m, std::size_t k) {
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  GramEigen out;
  const Eigen::Index d = gram.rows();
  for (std::size_t j = 0; j < k; ++j) {
    out.vectors.push_back(solver.eigenvectors().col(d - 1 - static_cast<Eigen::Index>(j)));
    out.values.push_back(solver.eigenvalues()(d - 1 - static_cast<Eigen::Index>(j)));
  }
  return out;
}

// Hard-debias equalization written out coordinate by coordinate.
// basis: orthonormal rows; members: rows of the equality set.
inline Mat Equalize(const Mat& members, const Mat& basis) {
  const std::size_t n = members.size();
  const std::size_t d = members[0].size();
  auto project = [&](const Vec& w) {
    Vec p(d, 0.0);
    for (const Vec& b : basis) {
      double c = 0.0;
      for (std::size_t i = 0; i < d; ++i) c += w[i] * b[i];
      for (std::size_t i = 0; i < d; ++i) p[i] += c * b[i];
    }
    return p;
  };
  Vec mu(d, 0.0);
  for (const Vec& w : members) {
    for (std::size_t i = 0; i < d; ++i) mu[i] += w[i] / static_cast<double>(n);
  }
  const Vec mu_b = project(mu);
  Vec nu(d);
  double nu_sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    nu[i] = mu[i] - mu_b[i];
    nu_sq += nu[i] * nu[i];
  }
  const double scale = std::sqrt(1.0 - nu_sq);
  Mat out;
  for (const Vec& w : members) {
    const Vec w_b = project(w);
    Vec diff(d);
    double len = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      diff[i] = w_b[i] - mu_b[i];
      len += diff[i] * diff[i];
    }
    len = std::sqrt(len);
    Vec e(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = nu[i] + scale * diff[i] / len;
    out.push_back(e);
  }
  return out;
}

// Mean over targets and attribute sets of the mean cosine distance.
inline double Mac(const Mat& targets, const std::vector<Mat>& attribute_sets) {
  double total = 0.0;
  std::size_t cells = 0;
  for (const Vec& s : targets) {
    for (const Mat& set : attribute_sets) {
      double f = 0.0;
      for (const Vec& a : set) f += 1.0 - Dot(s, a) / (Norm(s) * Norm(a));
      total += f / static_cast<double>(set.size());
      ++cells;
    }
  }
  return total / static_cast<double>(cells);
}

// sum over all components of all subspaces of (u . v)^2.
inline double Objective(const Vec& u, const std::vector<Mat>& subspaces) {
  double s = 0.0;
  for (const Mat& b : subspaces) {
    for (const Vec& v : b) {
      const double c = Dot(u, v);
      s += c * c;
    }
  }
  return s;
}

// Exhaustive search over the unit sphere in R^3 on a `step_deg` polar grid.
inline Vec GridMaximizer3d(const std::vector<Mat>& subspaces, double step_deg) {
  const double step = step_deg * std::numbers::pi / 180.0;
  const int n_theta = static_cast<int>(std::lround(180.0 / step_deg));
  const int n_phi = static_cast<int>(std::lround(360.0 / step_deg));
  // Objective is a quadratic form; accumulate it once.
  double q[3][3] = {};
  for (const Mat& b : subspaces) {
    for (const Vec& v : b) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) q[i][j] += v[i] * v[j];
      }
    }
  }
  double best = -1.0;
  Vec best_u(3);
  for (int it = 0; it <= n_theta; ++it) {
    const double theta = it * step;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = ip * step;
      const double u[3] = {st * std::cos(phi), st * std::sin(phi), ct};
      double f = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) f += u[i] * q[i][j] * u[j];
      }
      if (f > best) {
        best = f;
        best_u = {u[0], u[1], u[2]};
      }
    }
  }
  return best_u;
}

}  // namespace mcdebias::oracle

#endif  // MCDEBIAS_TESTS_ORACLES_H_
