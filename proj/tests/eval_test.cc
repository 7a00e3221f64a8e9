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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "error.h"
#include "eval.h"
#include "oracles.h"
#include "test_util.h"

namespace mcdebias {
namespace {

using testing::ThrownCode;

TEST(MeanCosDistance, KnownValues) {
  RowMatrix a(2, 2);
  a << 1, 0, -2, 0;
  Vector s(2);
  s << 3, 0;
  EXPECT_DOUBLE_EQ(MeanCosDistance(s, a), (0.0 + 2.0) / 2);
  EXPECT_EQ(ThrownCode([&] { MeanCosDistance(s, RowMatrix(0, 2)); }),
            ErrorCode::kEmptyAttributeSet);
  EXPECT_EQ(ThrownCode([&] { MeanCosDistance(Vector::Zero(2), a); }),
            ErrorCode::kZeroVector);
}

TEST(Mac, MatchesNestedLoops) {
  testing::Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = testing::UniformIndex(rng, 2, 15);
    const RowMatrix targets = testing::RandomMatrix(rng, testing::UniformIndex(rng, 1, 8), d);
    std::vector<RowMatrix> sets;
    std::vector<oracle::Mat> ref_sets;
    for (std::size_t j = 0, n = testing::UniformIndex(rng, 1, 4); j < n; ++j) {
      sets.push_back(testing::RandomMatrix(rng, testing::UniformIndex(rng, 1, 6), d));
      ref_sets.push_back(oracle::ToMat(sets.back()));
    }
    const MacReport r = Mac(targets, sets);
    EXPECT_NEAR(r.mac, oracle::Mac(oracle::ToMat(targets), ref_sets), 1e-12);
    EXPECT_EQ(r.table.rows(), targets.rows());
    EXPECT_EQ(r.table.cols(), static_cast<Eigen::Index>(sets.size()));
    EXPECT_NEAR(r.table.mean(), r.mac, 1e-15);
  }
}

TEST(Mac, OrthogonalPairIsExactlyOne) {
  RowMatrix s(1, 2);
  s << 1, 0;
  RowMatrix a(1, 2);
  a << 0, 1;
  EXPECT_EQ(Mac(s, {a}).mac, 1.0);
}

TEST(Mac, EmptyInputs) {
  RowMatrix a(1, 2);
  a << 0, 1;
  EXPECT_EQ(ThrownCode([&] { Mac(RowMatrix(0, 2), {a}); }), ErrorCode::kEmptySet);
  EXPECT_EQ(ThrownCode([&] { Mac(a, {RowMatrix(0, 2)}); }), ErrorCode::kEmptyAttributeSet);
}

TEST(MacForCategory, SkipsUnresolvedAttributeSets) {
  RowMatrix m(3, 2);
  m << 1, 0, 0, 1, 1, 1;
  const EmbeddingSet set({"jew", "violent", "greedy"}, m);
  CategorySpec spec;
  spec.name = "religion";
  spec.defining_sets = {{"jew"}};
  spec.target_words = {{"jew", "christian"}, {"jew"}};
  spec.attribute_sets = {{"violent"}, {"unknown"}, {"greedy"}};
  const MacReport r = MacForCategory(spec, set, false);
  EXPECT_EQ(r.table.rows(), 1);
  EXPECT_EQ(r.table.cols(), 2);
  EXPECT_EQ(r.attribute_labels, (std::vector<std::string>{"A0", "A2"}));
  EXPECT_NEAR(r.mac, (1.0 + (1.0 - std::sqrt(0.5))) / 2, 1e-15);
  EXPECT_GE(r.warnings.size(), 2u);
}

TEST(RegularizedIncompleteBeta, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 60.0}) {
    for (double b : {0.5, 1.0, 3.0, 25.0}) {
      for (double x : {0.0, 1e-6, 0.1, 0.37, 0.5, 0.9, 0.999, 1.0}) {
        EXPECT_NEAR(RegularizedIncompleteBeta(a, b, x), boost::math::ibeta(a, b, x), 1e-13)
            << a << " " << b << " " << x;
      }
    }
  }
}

TEST(StudentTCdf, MatchesBoost) {
  for (double df : {1.0, 2.0, 5.0, 29.0, 300.0}) {
    const boost::math::students_t dist(df);
    for (double t : {-40.0, -3.0, -1.0, -0.1, 0.0, 0.5, 2.0, 12.0}) {
      EXPECT_NEAR(StudentTCdf(t, df), boost::math::cdf(dist, t), 1e-13) << df << " " << t;
    }
  }
}

TEST(PairedTTest, MatchesHandComputation) {
  const std::vector<double> before = {0.61, 0.58, 0.72, 0.66, 0.59, 0.70};
  const std::vector<double> after = {0.80, 0.75, 0.79, 0.83, 0.71, 0.88};
  double mean = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) mean += after[i] - before[i];
  mean /= before.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    const double dv = after[i] - before[i] - mean;
    ss += dv * dv;
  }
  const double sd = std::sqrt(ss / (before.size() - 1));
  const double t = mean / (sd / std::sqrt(static_cast<double>(before.size())));
  const boost::math::students_t dist(before.size() - 1.0);
  const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));

  const TTestResult r = PairedTTest(before, after);
  EXPECT_EQ(r.df, before.size() - 1);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.p, p, 1e-12);
  EXPECT_FALSE(r.zero_variance);
}

TEST(PairedTTest, DegenerateCases) {
  const std::vector<double> x = {0.5, 0.6, 0.7};
  const TTestResult same = PairedTTest(x, x);
  EXPECT_TRUE(same.zero_variance);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p, 1.0);

  const std::vector<double> shifted = {0.75, 0.85, 0.95};
  const TTestResult constant = PairedTTest(x, shifted);
  EXPECT_TRUE(constant.zero_variance);
  EXPECT_EQ(constant.t, std::numeric_limits<double>::infinity());
  EXPECT_EQ(constant.p, 0.0);

  EXPECT_EQ(ThrownCode([&] { PairedTTest(std::vector<double>{1.0}, std::vector<double>{2.0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { PairedTTest(x, std::vector<double>{1.0, 2.0}); }),
            ErrorCode::kLengthMismatch);
}

GroupOutcome Group(const std::string& label, std::uint64_t tp, std::uint64_t fp,
                   std::uint64_t tn, std::uint64_t fn) {
  return {label, tp, fp, tn, fn};
}

TEST(EqualityDifferences, TwoGroupExample) {
  const GroupOutcome overall = Group("overall", 10, 50, 50, 10);
  const EqualityDifferences r = ComputeEqualityDifferences(
      {Group("a", 10, 40, 60, 10), Group("b", 10, 60, 40, 10)}, overall);
  EXPECT_NEAR(r.fped, 0.2, 1e-12);
  EXPECT_NEAR(r.fned, 0.0, 1e-12);
  EXPECT_NEAR(r.total(), 0.2, 1e-12);
}

TEST(EqualityDifferences, EqualRatesGiveZero) {
  const GroupOutcome overall = Group("overall", 30, 20, 80, 10);
  const EqualityDifferences r = ComputeEqualityDifferences(
      {Group("a", 3, 2, 8, 1), Group("b", 6, 4, 16, 2), Group("c", 30, 20, 80, 10)}, overall);
  EXPECT_EQ(r.fped, 0.0);
  EXPECT_EQ(r.fned, 0.0);
}

TEST(EqualityDifferences, PermutationInvariant) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GroupOutcome> groups;
    for (std::size_t i = 0, n = testing::UniformIndex(rng, 2, 8); i < n; ++i) {
      groups.push_back(Group("g" + std::to_string(i), testing::UniformIndex(rng, 1, 50),
                             testing::UniformIndex(rng, 1, 50),
                             testing::UniformIndex(rng, 1, 50),
                             testing::UniformIndex(rng, 1, 50)));
    }
    const GroupOutcome overall = Group("overall", 100, 100, 100, 100);
    const EqualityDifferences a = ComputeEqualityDifferences(groups, overall);
    std::shuffle(groups.begin(), groups.end(), rng);
    const EqualityDifferences b = ComputeEqualityDifferences(groups, overall);
    EXPECT_NEAR(a.fped, b.fped, 1e-12);
    EXPECT_NEAR(a.fned, b.fned, 1e-12);
  }
}

TEST(EqualityDifferences, UndefinedRates) {
  const GroupOutcome overall = Group("overall", 10, 50, 50, 10);
  // Group "empty" has no negatives, so its FPR is undefined.
  const EqualityDifferences r = ComputeEqualityDifferences(
      {Group("a", 10, 40, 60, 10), Group("empty", 5, 0, 0, 5)}, overall);
  EXPECT_EQ(r.fpr_groups, 1u);
  EXPECT_EQ(r.fnr_groups, 2u);
  EXPECT_NEAR(r.fped, 0.1, 1e-12);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(ThrownCode([&] {
              ComputeEqualityDifferences({Group("x", 0, 0, 0, 0)}, overall);
            }),
            ErrorCode::kNoValidGroups);
  EXPECT_EQ(ThrownCode([&] {
              ComputeEqualityDifferences({Group("a", 1, 1, 1, 1)}, Group("o", 0, 0, 0, 0));
            }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace mcdebias
