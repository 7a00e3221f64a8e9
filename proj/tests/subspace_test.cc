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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "error.h"
#include "oracles.h"
#include "subspace.h"
#include "test_util.h"

namespace mcdebias {
namespace {

using testing::ThrownCode;

TEST(BiasSubspace, Validation) {
  RowMatrix c(1, 2);
  c << 1, 0;
  EXPECT_EQ(ThrownCode([&] { BiasSubspace("", c); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { BiasSubspace("two words", c); }),
            ErrorCode::kInvalidArgument);
  RowMatrix tall(3, 2);
  tall.setIdentity();
  EXPECT_EQ(ThrownCode([&] { BiasSubspace("x", tall); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { BiasSubspace("x", c, {1.0, 2.0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_TRUE(BiasSubspace("x", c).orthonormal());
  RowMatrix skew(2, 2);
  skew << 1, 0, std::sqrt(0.5), std::sqrt(0.5);
  EXPECT_FALSE(BiasSubspace("x", skew).orthonormal());
}

TEST(ApplySignConvention, LargestMagnitudePositive) {
  Vector v(3);
  v << 0.2, -0.9, 0.3;
  ApplySignConvention(v);
  EXPECT_GT(v(1), 0.0);
  EXPECT_LT(v(0), 0.0);
  Vector tie(2);
  tie << -0.5, 0.5;
  ApplySignConvention(tie);
  EXPECT_GT(tie(0), 0.0);
}

TEST(PrincipalComponents, MatchesGramEigendecomposition) {
  testing::Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = testing::UniformIndex(rng, 2, 60);
    const std::size_t d = testing::UniformIndex(rng, 2, 20);
    const std::size_t k = testing::UniformIndex(rng, 1, std::min(m, d));
    const RowMatrix x = testing::RandomMatrix(rng, m, d);
    const PcaResult pca = PrincipalComponents(x, k);
    ASSERT_FALSE(pca.rank_deficient);
    ASSERT_EQ(pca.subspace.k(), k);
    EXPECT_TRUE(pca.subspace.orthonormal());
    const oracle::GramEigen ref = oracle::GramTopK(x, k);
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_GT(std::abs(pca.subspace.component(j).dot(ref.vectors[j])), 1 - 1e-9);
      const double variance = ref.values[j] / static_cast<double>(m - 1);
      EXPECT_NEAR(pca.subspace.explained_variance()[j], variance, 1e-9 * variance);
    }
  }
}

TEST(PrincipalComponents, SignConventionApplied) {
  testing::Rng rng(5);
  const PcaResult pca = PrincipalComponents(testing::RandomMatrix(rng, 10, 6), 3);
  for (std::size_t j = 0; j < 3; ++j) {
    const Vector v = pca.subspace.component(j);
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    EXPECT_GT(v(at), 0.0);
  }
}

TEST(PrincipalComponents, DoubleCenterRemovesGlobalMean) {
  // Rows x_i = c + t_i e0 with a large common offset c: without centering the
  // offset dominates, with it the variation along e0 is recovered.
  RowMatrix x(4, 3);
  x << 5, 5, 0, 6, 5, 0, 7, 5, 0, 8, 5, 0;
  const PcaResult raw = PrincipalComponents(x, 1, false);
  const PcaResult centered = PrincipalComponents(x, 1, true);
  EXPECT_LT(std::abs(raw.subspace.component(0)(0)), 0.99);
  EXPECT_NEAR(std::abs(centered.subspace.component(0)(0)), 1.0, 1e-12);
}

TEST(PrincipalComponents, RankDeficiencyKeepsAchievableComponents) {
  RowMatrix x(4, 5);
  x.setZero();
  x(0, 0) = 1;
  x(1, 0) = -1;
  x(2, 1) = 2;
  x(3, 1) = -2;
  const PcaResult pca = PrincipalComponents(x, 3);
  EXPECT_TRUE(pca.rank_deficient);
  EXPECT_EQ(pca.requested_k, 3u);
  EXPECT_EQ(pca.subspace.k(), 2u);
  EXPECT_NEAR(pca.subspace.component(0)(1), 1.0, 1e-12);

  const RowMatrix zeros = RowMatrix::Zero(3, 3);
  EXPECT_EQ(ThrownCode([&] { PrincipalComponents(zeros, 1); }),
            ErrorCode::kRankDeficient);
}

TEST(PrincipalComponents, KOutOfRange) {
  const RowMatrix x = RowMatrix::Identity(3, 4);
  EXPECT_EQ(ThrownCode([&] { PrincipalComponents(x, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { PrincipalComponents(x, 4); }), ErrorCode::kInvalidArgument);
}

EmbeddingSet GenderToy() {
  RowMatrix m(4, 3);
  const double a = std::sqrt(0.5);
  m << a, a, 0,   // he
      -a, a, 0,   // she
      a, 0, a,    // man
      -a, 0, a;   // woman
  return EmbeddingSet({"he", "she", "man", "woman"}, m, true);
}

TEST(BuildBiasSubspace, RecoversPlantedDirection) {
  CategorySpec spec;
  spec.name = "binary gender";
  spec.defining_sets = {{"he", "she"}, {"man", "woman"}};
  const PcaResult pca = BuildBiasSubspace(spec, GenderToy(), 1);
  EXPECT_EQ(pca.subspace.label(), "binary_gender");
  EXPECT_NEAR(pca.subspace.component(0)(0), 1.0, 1e-12);
  // Centered differences are +-a along e0, four rows.
  EXPECT_NEAR(pca.subspace.explained_variance()[0], 4 * 0.5 / 3.0, 1e-12);
}

TEST(BuildBiasSubspace, RequiresNormalizedEmbeddings) {
  CategorySpec spec;
  spec.name = "g";
  spec.defining_sets = {{"a", "b"}};
  RowMatrix m(2, 2);
  m << 2, 0, 0, 2;
  const EmbeddingSet raw({"a", "b"}, m);
  EXPECT_EQ(ThrownCode([&] { BuildBiasSubspace(spec, raw, 1); }),
            ErrorCode::kNotNormalized);
}

TEST(CenteredDifferences, RowsPerDefiningWord) {
  const EmbeddingSet set = GenderToy();
  CategorySpec spec;
  spec.name = "g";
  spec.defining_sets = {{"he", "she", "man"}};
  const RowMatrix diffs = CenteredDifferences(ResolveCategory(spec, set, false), set);
  ASSERT_EQ(diffs.rows(), 3);
  EXPECT_NEAR(diffs.colwise().sum().norm(), 0.0, 1e-15);
}

TEST(SubspaceText, RoundTripIsExact) {
  testing::Rng rng(9);
  const BiasSubspace s = testing::RandomSubspace(rng, 3, 7, "race");
  const std::string text = SerializeSubspace(s);
  EXPECT_EQ(text.substr(0, 9), "race 3 7\n");
  const BiasSubspace back = ParseSubspace(text);
  EXPECT_EQ(back.label(), "race");
  EXPECT_EQ(back.components(), s.components());
}

TEST(SubspaceText, Errors) {
  EXPECT_EQ(ThrownCode([] { ParseSubspace("label two 3\n"); }), ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([] { ParseSubspace("x 1 3\n1 0\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(ThrownCode([] { ParseSubspace("x 1 2\n1 0 0\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(ThrownCode([] { LoadSubspace("/nonexistent.sub"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace mcdebias
