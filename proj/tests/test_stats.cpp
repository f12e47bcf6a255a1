// Copyright 2026 The hvsinglet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hvsinglet/parallel.hpp"
#include "hvsinglet/random.hpp"
#include "hvsinglet/stats.hpp"

namespace hvs {
namespace {

TEST(Seeds, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
  static_assert(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformInRange) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Accumulator, MatchesTwoPassFormulas) {
  const std::vector<double> xs = {1.5, -2.0, 3.25, 0.0, 7.0, 2.0};
  Accumulator acc;
  for (double x : xs) acc.add(x);
  double m = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= xs.size() - 1;
  EXPECT_NEAR(acc.mean(), m, 1e-15);
  EXPECT_NEAR(acc.variance(), v, 1e-14);
  EXPECT_NEAR(acc.estimate().std_error, std::sqrt(v / xs.size()), 1e-15);
}

TEST(Accumulator, MergeEqualsSequential) {
  Rng rng(2);
  Accumulator all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-3, 5);
    all.add(x);
    (i < 377 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  EXPECT_NEAR(left.mean(), all.mean(), 1e-14);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-12);
}

TEST(Estimate, AgreementUsesFloor) {
  const Estimate zero_var{0.25 + 1e-14, 0.0, 100};
  EXPECT_TRUE(zero_var.agrees_with(0.25));
  EXPECT_FALSE(zero_var.agrees_with(0.26));
  const Estimate e{1.0, 0.1, 100};
  EXPECT_TRUE(e.agrees_with(1.39));
  EXPECT_FALSE(e.agrees_with(1.41));
}

TEST(Ks, IdenticalAndDisjointSamples) {
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(ks_statistic(x, x), 0.0);
  EXPECT_DOUBLE_EQ(ks_statistic({1, 2, 3}, {4, 5, 6}), 1.0);
  EXPECT_THROW(ks_statistic({}, {1.0}), InvalidArgument);
}

TEST(Ks, HandlesTies) {
  // F1 jumps to 1/2 at 0; F2 jumps to 1/4 at 0.
  EXPECT_DOUBLE_EQ(ks_statistic({0, 0, 1, 1}, {0, 1, 1, 1}), 0.25);
}

TEST(Ks, CriticalValueFormula) {
  const double c = ks_critical_value(1e-3, 1000, 1000);
  EXPECT_NEAR(c, std::sqrt(-std::log(5e-4) / 2) * std::sqrt(2.0 / 1000), 1e-15);
  EXPECT_NEAR(std::sqrt(-std::log(0.025) / 2), 1.358, 1e-3);
}

TEST(Ks, SameDistributionRarelyRejects) {
  Rng rng(3);
  int rejections = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(2000), y(2000);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : y) v = rng.uniform();
    if (ks_statistic(x, y) > ks_critical_value(1e-3, 2000, 2000)) ++rejections;
  }
  EXPECT_LE(rejections, 1);
}

TEST(Ks, ShiftedDistributionRejects) {
  Rng rng(4);
  std::vector<double> x(2000), y(2000);
  for (auto& v : x) v = rng.uniform();
  for (auto& v : y) v = rng.uniform() + 0.1;
  EXPECT_GT(ks_statistic(x, y), ks_critical_value(1e-3, 2000, 2000));
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(1.5 - 2.0 * v);
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.5, 1e-14);
  EXPECT_NEAR(f.rms_residual, 0.0, 1e-14);
  EXPECT_NEAR(f.slope_std_error, 0.0, 1e-14);
}

TEST(FitLine, RejectsDegenerateInput) {
  EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), InsufficientData);
  EXPECT_THROW(fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), InsufficientData);
}

TEST(McMean, BitwiseIndependentOfWorkers) {
  auto draw = [](Rng& rng) {
    const double u = rng.uniform();
    return std::array<double, 2>{u, u * u};
  };
  const std::uint64_t n = 3 * kBlockSize + 123;
  const auto ref = mc_mean<2>(n, 99, 1, draw);
  for (unsigned w : {2u, 3u, 8u}) {
    const auto got = mc_mean<2>(n, 99, w, draw);
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(got[k].mean, ref[k].mean);
      EXPECT_EQ(got[k].std_error, ref[k].std_error);
      EXPECT_EQ(got[k].n, n);
    }
  }
  EXPECT_NEAR(ref[0].mean, 0.5, 4 * ref[0].std_error);
  EXPECT_NEAR(ref[1].mean, 1.0 / 3.0, 4 * ref[1].std_error);
}

TEST(McMean, PropagatesFirstError) {
  auto draw = [](Rng& rng) -> std::array<double, 1> {
    if (rng.uniform() < 1e-3) throw InvalidArgument("boom");
    return {1.0};
  };
  EXPECT_THROW(mc_mean<1>(4 * kBlockSize, 0, 3, draw), InvalidArgument);
}

}  // namespace
}  // namespace hvs
