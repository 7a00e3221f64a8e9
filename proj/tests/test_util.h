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

// Random instances and planted-bias fixtures shared by the test binaries.

#ifndef MCDEBIAS_TESTS_TEST_UTIL_H_
#define MCDEBIAS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "embeddings.h"
#include "error.h"
#include "subspace.h"
#include "types.h"
#include "wordsets.h"

namespace mcdebias::testing {

using Rng = std::mt19937_64;

// Code of the mcdebias::Error thrown by `f`, or nullopt if it returns.
template <typename F>
std::optional<ErrorCode> ThrownCode(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Vector RandomGaussian(Rng& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return v;
}

inline Vector RandomUnit(Rng& rng, std::size_t d) {
  Vector v = RandomGaussian(rng, d);
  return v / v.norm();
}

inline RowMatrix RandomMatrix(Rng& rng, std::size_t rows, std::size_t cols) {
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

// K orthonormal rows in R^d from the QR factorization of a Gaussian matrix.
inline RowMatrix RandomOrthonormalRows(Rng& rng, std::size_t k, std::size_t d) {
  const Eigen::MatrixXd g = RandomMatrix(rng, d, k);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                    static_cast<Eigen::Index>(k));
  return q.transpose();
}

inline BiasSubspace RandomSubspace(Rng& rng, std::size_t k, std::size_t d,
                                   const std::string& label = "R") {
  return BiasSubspace(label, RandomOrthonormalRows(rng, k, d));
}

inline std::size_t UniformIndex(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Component of `v` orthogonal to the rows of `basis` (orthonormal rows).
inline Vector ProjectOut(const Vector& v, const RowMatrix& basis) {
  return v - basis.transpose() * (basis * v);
}

// Two categories whose bias planes share one direction g. Category c's plane
// is span{g, u_c} with u_1, u_2 orthogonal to g and cos(u_1, u_2) = 0.5; its
// defining pairs differ along mixtures of g and u_c with a category-specific
// dominant mixture. Targets and attribute words lean along g.
struct PlantedBias {
  EmbeddingSet embeddings;
  std::vector<CategorySpec> specs;
  Vector g;
  Vector u1;
  Vector u2;
  std::vector<std::string> neutral_targets;
};

inline PlantedBias MakePlantedBias(std::uint64_t seed, std::size_t d = 50,
                                   std::size_t vocab = 500) {
  Rng rng(seed);
  // Planted orthonormal frame e0 = g, e1, e2.
  const RowMatrix frame = RandomOrthonormalRows(rng, 3, d);
  const Vector g = frame.row(0).transpose();
  const Vector e1 = frame.row(1).transpose();
  const Vector e2 = frame.row(2).transpose();
  const Vector u1 = e1;
  const Vector u2 = 0.5 * e1 + std::sqrt(0.75) * e2;
  auto plane = [&](const Vector& u, double mix_g, double mix_u) {
    RowMatrix p(2, static_cast<Eigen::Index>(d));
    const Vector a = (mix_g * g + mix_u * u).normalized();
    const Vector b = (g - a.dot(g) * a).normalized();
    p.row(0) = a.transpose();
    p.row(1) = b.transpose();
    return p;
  };
  const RowMatrix plane1 = plane(u1, 1.0, 2.0);
  const RowMatrix plane2 = plane(u2, 2.0, 1.0);

  std::vector<std::string> words;
  std::vector<Vector> rows;
  auto complement_unit = [&]() {
    Vector v = ProjectOut(RandomGaussian(rng, d), frame);
    return Vector(v / v.norm());
  };
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CategorySpec> specs;
  for (int c = 0; c < 2; ++c) {
    const RowMatrix& p = c == 0 ? plane1 : plane2;
    CategorySpec spec;
    spec.name = c == 0 ? "alpha" : "beta";
    for (int i = 0; i < 10; ++i) {
      const Vector delta =
          (3.0 * normal(rng) * p.row(0).transpose() + normal(rng) * p.row(1).transpose())
              .normalized();
      const Vector base = complement_unit();
      const double r = 0.6;
      const std::string stem = spec.name + "_d" + std::to_string(i);
      words.push_back(stem + "a");
      rows.push_back(std::sqrt(1 - r * r) * base + r * delta);
      words.push_back(stem + "b");
      rows.push_back(std::sqrt(1 - r * r) * base - r * delta);
      spec.defining_sets.push_back({stem + "a", stem + "b"});
    }
    specs.push_back(std::move(spec));
  }

  const double lean = 0.8;
  std::vector<std::string> targets;
  for (int i = 0; i < 10; ++i) {
    targets.push_back("target" + std::to_string(i));
    words.push_back(targets.back());
    rows.push_back((complement_unit() + lean * g).normalized());
  }
  std::vector<std::vector<std::string>> attributes(2);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 10; ++i) {
      attributes[j].push_back("attr" + std::to_string(j) + "_" + std::to_string(i));
      words.push_back(attributes[j].back());
      rows.push_back((complement_unit() + lean * g).normalized());
    }
  }
  for (CategorySpec& spec : specs) {
    spec.target_words = {targets};
    spec.attribute_sets = attributes;
  }
  while (words.size() < vocab) {
    words.push_back("filler" + std::to_string(words.size()));
    rows.push_back(RandomUnit(rng, d));
  }
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return {EmbeddingSet(words, std::move(m), true), std::move(specs), g, u1, u2,
          targets};
}

}  // namespace mcdebias::testing

#endif  // MCDEBIAS_TESTS_TEST_UTIL_H_
