// Copyright 2026 The lotka Authors
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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cad_reference.hpp"
#include "lotka/law.hpp"
#include "test_support.hpp"

namespace lotka {
namespace {

// Independent recomputation in long double, straight from the table.
struct Sums {
  long double x = 0, y = 0, xy = 0, x2 = 0;
};

Sums oracle_sums() {
  Sums s;
  for (const auto& r : testdata::kCadLogLog) {
    const long double X = std::log10(static_cast<long double>(r.x));
    const long double Y = std::log10(static_cast<long double>(r.y));
    s.x += X;
    s.y += Y;
    s.xy += X * Y;
    s.x2 += X * X;
  }
  return s;
}

TEST(FitExponent, CadSumsMatchIndependentRecomputation) {
  const auto fit = fit_exponent_lsq(testing::cad_distribution());
  const auto o = oracle_sums();
  EXPECT_NEAR(fit.sums.sum_x, static_cast<double>(o.x), 1e-9);
  EXPECT_NEAR(fit.sums.sum_y, static_cast<double>(o.y), 1e-9);
  EXPECT_NEAR(fit.sums.sum_xy, static_cast<double>(o.xy), 1e-9);
  EXPECT_NEAR(fit.sums.sum_x2, static_cast<double>(o.x2), 1e-9);
  EXPECT_EQ(fit.sums.point_count, 34u);
}

TEST(FitExponent, CadSumsMatchPrintedTotals) {
  const auto fit = fit_exponent_lsq(testing::cad_distribution());
  EXPECT_NEAR(fit.sums.sum_x, testdata::kCadSumX, 1e-4);
  EXPECT_NEAR(fit.sums.sum_y, testdata::kCadSumY, 1e-4);
  EXPECT_NEAR(fit.sums.sum_xy, testdata::kCadSumXY, 1e-4);
  EXPECT_NEAR(fit.sums.sum_x2, testdata::kCadSumX2, 1e-4);
}

TEST(FitExponent, CadPrintedLogColumns) {
  for (const auto& r : testdata::kCadLogLog) {
    const double X = std::log10(static_cast<double>(r.x));
    const double Y = std::log10(static_cast<double>(r.y));
    EXPECT_NEAR(X, r.log_x, 6e-6) << "x=" << r.x;
    EXPECT_NEAR(Y, r.log_y, 6e-6) << "x=" << r.x;
    EXPECT_NEAR(X * X, r.x2, 1.5e-5) << "x=" << r.x;
  }
}

TEST(FitExponent, CadExponent) {
  const auto fit = fit_exponent_lsq(testing::cad_distribution());
  // Closed-form slope from the long-double sums above.
  const auto o = oracle_sums();
  const long double N = 34;
  const long double slope =
      (N * o.xy - o.x * o.y) / (N * o.x2 - o.x * o.x);
  EXPECT_NEAR(fit.slope, static_cast<double>(slope), 1e-12);
  EXPECT_NEAR(fit.n, 2.544980948, 1e-9);
  EXPECT_GT(fit.n, 2.535);
  EXPECT_LT(fit.n, 2.555);
  EXPECT_NEAR(fit.intercept, static_cast<double>((o.y - slope * o.x) / N),
              1e-12);
}

TEST(FitExponent, ExactTwoPointLaw) {
  const auto fit =
      fit_exponent_lsq(ProductivityDistribution({{1, 100}, {2, 25}}));
  EXPECT_NEAR(fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(fit.n, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 2.0, 1e-12);
}

TEST(FitExponent, NoiselessInverseCube) {
  std::vector<LogLogPoint> pts;
  for (int x = 1; x <= 20; ++x) pts.push_back({double(x), 1e6 * std::pow(x, -3.0)});
  const auto fit = fit_exponent_lsq(std::span<const LogLogPoint>(pts));
  EXPECT_NEAR(fit.n, 3.0, 1e-9);
  EXPECT_NEAR(fit.intercept, 6.0, 1e-9);
}

TEST(FitExponent, RecoversExactLawsAcrossExponents) {
  for (double n = 1.2; n < 4.0; n += 0.17) {
    std::vector<LogLogPoint> pts;
    for (int x = 1; x <= 60; x += 3) pts.push_back({double(x), 37.5 * std::pow(x, -n)});
    EXPECT_NEAR(fit_exponent_lsq(std::span<const LogLogPoint>(pts)).n, n, 1e-9);
  }
}

TEST(FitExponent, ScaleEquivariance) {
  const auto base = fit_exponent_lsq(testing::cad_distribution());
  const auto cad = testing::cad_distribution();
  for (std::int64_t k : {2, 7, 1000}) {
    std::vector<ProductivityPoint> pts;
    for (const auto& p : cad.points())
      pts.push_back({p.papers, p.authors * k});
    const auto scaled = fit_exponent_lsq(ProductivityDistribution(pts));
    EXPECT_NEAR(scaled.n, base.n, 1e-9);
    EXPECT_NEAR(scaled.intercept - base.intercept, std::log10(double(k)), 1e-9);
  }
}

TEST(FitExponent, Truncation) {
  const auto d = testing::cad_distribution();
  const auto full = fit_exponent_lsq(d);
  const auto cut = fit_exponent_lsq(d, {.max_x = 10});
  EXPECT_EQ(cut.sums.point_count, 10u);
  EXPECT_NE(cut.n, full.n);
}

TEST(FitExponent, DegenerateInputs) {
  try {
    fit_exponent_lsq(ProductivityDistribution({{3, 5}}));
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate regression"),
              std::string::npos);
  }
  EXPECT_THROW(fit_exponent_lsq(testing::cad_distribution(), {.max_x = 1}),
               NumericError);
  const std::vector<LogLogPoint> same_x{{4, 1}, {4, 9}};
  EXPECT_THROW(fit_exponent_lsq(std::span<const LogLogPoint>(same_x)),
               NumericError);
}

TEST(ComputeConstant, InverseSquare) {
  // The P = 20 Euler-Maclaurin tail is good to about 4e-9 here.
  EXPECT_NEAR(compute_constant(2.0), 6.0 / (std::numbers::pi * std::numbers::pi),
              1e-8);
  EXPECT_NEAR(compute_constant(2.0), 0.6079, 5e-5);
}

TEST(ComputeConstant, PublishedExponent) {
  EXPECT_NEAR(compute_constant(2.54), 0.7539, 5e-4);
  EXPECT_NEAR(compute_constant(2.54), 0.753893759763389, 1e-8);
}

TEST(ComputeConstant, AgainstHighPrecisionReference) {
  // 1 / zeta(n), 30-digit arithmetic.
  const std::pair<double, double> ref[] = {
      {1.5, 0.382793383999426562}, {2.0, 0.607927101854026629},
      {3.0, 0.831907372580707469}, {5.0, 0.964387340429262459},
      {10.0, 0.999006413069030782}};
  for (auto [n, c] : ref) EXPECT_NEAR(compute_constant(n), c, 1e-8) << n;
}

TEST(ComputeConstant, LargeExponentAgainstTruncatedSum) {
  const double oracle = compute_constant(10.0, TruncatedSum{1'000'000});
  EXPECT_NEAR(oracle, 0.99900641306903, 1e-12);
  EXPECT_NEAR(compute_constant(10.0), oracle, 1e-12);
}

TEST(ComputeConstant, ZetaTailAgreesWithTruncatedSum) {
  for (double n = 1.5; n <= 5.0 + 1e-9; n += 0.25) {
    const double zeta_c = compute_constant(n, ZetaTail{});
    const double sum_c = compute_constant(n, TruncatedSum{1'000'000});
    // The truncated sum overestimates c by roughly c^2 * tail.
    const double tail = std::pow(1e6, 1.0 - n) / (n - 1.0);
    EXPECT_NEAR(zeta_c, sum_c, 1e-6 + zeta_c * zeta_c * tail) << n;
  }
}

TEST(ComputeConstant, NormalizationBound) {
  for (double n = 1.5; n <= 5.0 + 1e-9; n += 0.5) {
    const double c = compute_constant(n);
    const double partial = 1.0 / compute_constant(n, TruncatedSum{1'000'000});
    const double tail_bound = c * std::pow(1e6, 1.0 - n) / (n - 1.0);
    const double total = c * partial;
    // The tail bound drops below the 1e-8 accuracy of ZetaTail once n > ~2.5,
    // so the lower edge carries that allowance.
    EXPECT_GE(total, 1.0 - 10.0 * tail_bound - 1e-8) << n;
    // Floating-point slack only.
    EXPECT_LE(total, 1.0 + 1e-12) << n;
  }
}

TEST(ComputeConstant, DivergentSeries) {
  for (double n : {1.0, 0.5, 1.0 + 1e-7, -2.0}) {
    try {
      compute_constant(n);
      ADD_FAILURE() << n;
    } catch (const NumericError& e) {
      EXPECT_NE(std::string(e.what()).find("series diverges"), std::string::npos);
    }
  }
  EXPECT_THROW(compute_constant(2.0, TruncatedSum{0}), NumericError);
  EXPECT_NO_THROW(compute_constant(1.0 + 2e-6));
}

TEST(ExpectedProportion, Values) {
  EXPECT_DOUBLE_EQ(expected_proportion(2.54, 0.7539, 1), 0.7539);
  EXPECT_DOUBLE_EQ(expected_proportion(2.54, 0.7539, 2),
                   0.7539 * std::pow(2.0, -2.54));
  // The published x = 2 entry (0.129182) uses the unrounded fitted exponent.
  const double n = fit_exponent_lsq(testing::cad_distribution()).n;
  EXPECT_NEAR(expected_proportion(n, 0.7539, 2), 0.129182, 1e-4);
  for (double m : {1.3, 2.0, 4.4}) EXPECT_DOUBLE_EQ(expected_proportion(m, 0.42, 1), 0.42);
  EXPECT_THROW(expected_proportion(2.0, 0.6, 0), DataError);
  EXPECT_THROW(expected_proportion(2.0, 0.6, -3), DataError);
}

TEST(ExpectedProportion, Monotone) {
  for (double n = 1.1; n < 5; n += 0.3)
    for (std::int64_t x = 1; x < 200; ++x) {
      EXPECT_GT(expected_proportion(n, 0.7, x), expected_proportion(n, 0.7, x + 1));
      if (x >= 2) {
        EXPECT_GT(expected_proportion(n, 0.7, x), expected_proportion(n + 0.1, 0.7, x));
      }
    }
}

TEST(ExpectedDistribution, CadExpectedColumn) {
  std::vector<std::int64_t> xs;
  for (const auto& r : testdata::kCadKs) xs.push_back(r.x);
  const double n = fit_exponent_lsq(testing::cad_distribution()).n;
  const auto e = expected_distribution(n, 0.7539, xs);
  ASSERT_EQ(e.size(), 34u);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(e[i].papers, testdata::kCadKs[i].x);
    EXPECT_NEAR(e[i].proportion, testdata::kCadKs[i].expected, 1e-4) << e[i].papers;
    if (i > 0) {
      EXPECT_LT(e[i].proportion, e[i - 1].proportion);
    }
  }
}

TEST(ExpectedDistribution, SmallCases) {
  const std::vector<std::int64_t> one{1};
  const auto e1 = expected_distribution(2.0, 0.6, one);
  ASSERT_EQ(e1.size(), 1u);
  EXPECT_DOUBLE_EQ(e1[0].proportion, 0.6);

  const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
  const std::vector<std::int64_t> five{1, 2, 3, 4, 5};
  double total = 0;
  for (const auto& p : expected_distribution(2.0, c, five)) total += p.proportion;
  EXPECT_NEAR(total, c / compute_constant(2.0, TruncatedSum{5}), 1e-12);
  EXPECT_NEAR(total, 0.889768861, 1e-9);
}

TEST(FitLotka, ConstantAtTableResolution) {
  const auto fit = fit_lotka(testing::cad_distribution());
  ASSERT_TRUE(fit.c);
  EXPECT_DOUBLE_EQ(*fit.c_exponent, 2.54);
  EXPECT_NEAR(*fit.c, 0.7539, 5e-5);

  const auto full = fit_lotka(testing::cad_distribution(),
                              {.fit = {}, .constant_method = ZetaTail{}, .constant_decimals = std::nullopt});
  EXPECT_DOUBLE_EQ(*full.c_exponent, full.n);
  EXPECT_NEAR(*full.c, compute_constant(full.n), 1e-15);

  const auto two = fit_lotka(ProductivityDistribution({{1, 100}, {2, 25}}));
  EXPECT_NEAR(*two.c, 0.6079, 5e-5);
}

TEST(FitLotka, FlatDataDiverges) {
  // Slope of zero: the law cannot be normalized.
  EXPECT_THROW(fit_lotka(ProductivityDistribution({{1, 5}, {2, 5}, {3, 5}})),
               NumericError);
}

}  // namespace
}  // namespace lotka
