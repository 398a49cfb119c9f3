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

#pragma once

// Generalized Lotka law  y(x) = C / x^n.
//
// The exponent is the magnitude of the least-squares slope of log10(y) on
// log10(x), every observed row weighted equally. The constant normalizes the
// law over x = 1..inf, i.e. C = 1 / zeta(n).

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "lotka/corpus.hpp"
#include "lotka/error.hpp"
#include "lotka/format.hpp"

namespace lotka {

// Column totals of the log-log table, X = log10 x and Y = log10 y.
struct RegressionSums {
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xy = 0.0;
  double sum_x2 = 0.0;
  std::size_t point_count = 0;
};

struct LotkaFit {
  double n = 0.0;          // |slope|
  double slope = 0.0;      // d log10(y) / d log10(x)
  double intercept = 0.0;  // log10 scale; diagnostic only
  RegressionSums sums;
  std::optional<double> c;           // set by fit_lotka
  std::optional<double> c_exponent;  // exponent at which c was evaluated
};

struct FitOptions {
  // Drop rows with x above this before regressing. Off by default.
  std::optional<std::int64_t> max_x;
};

// Real-valued (x, y) pair; lets exact power laws be regressed without
// rounding y to whole authors.
struct LogLogPoint {
  double x = 0.0;
  double y = 0.0;
};

inline LotkaFit fit_exponent_lsq(std::span<const LogLogPoint> points) {
  RegressionSums s;
  for (const auto& p : points) {
    if (!(p.x > 0.0) || !(p.y > 0.0))
      throw DataError("log-log regression needs positive x and y");
    const double X = std::log10(p.x);
    const double Y = std::log10(p.y);
    s.sum_x += X;
    s.sum_y += Y;
    s.sum_xy += X * Y;
    s.sum_x2 += X * X;
    ++s.point_count;
  }
  if (s.point_count < 2)
    throw NumericError("degenerate regression: need at least 2 distinct x "
                       "values, have " + std::to_string(s.point_count));

  const double N = static_cast<double>(s.point_count);
  const double denom = N * s.sum_x2 - s.sum_x * s.sum_x;
  if (!(std::abs(denom) > 1e-12))
    throw NumericError("degenerate regression: zero variance in log10(x)");

  LotkaFit fit;
  fit.sums = s;
  fit.slope = (N * s.sum_xy - s.sum_x * s.sum_y) / denom;
  fit.n = std::abs(fit.slope);
  fit.intercept = (s.sum_y - fit.slope * s.sum_x) / N;
  return fit;
}

inline LotkaFit fit_exponent_lsq(const ProductivityDistribution& dist,
                                 const FitOptions& options = {}) {
  std::vector<LogLogPoint> points;
  points.reserve(dist.size());
  for (const auto& p : dist.points()) {
    if (options.max_x && p.papers > *options.max_x) continue;
    points.push_back({static_cast<double>(p.papers),
                      static_cast<double>(p.authors)});
  }
  return fit_exponent_lsq(std::span<const LogLogPoint>(points));
}

// Series evaluation strategies for sum_{x>=1} x^-n.
struct ZetaTail {};  // head to P-1 plus Euler-Maclaurin tail at P = 20
struct TruncatedSum {
  std::int64_t limit = 1'000'000;
};
using ConstantMethod = std::variant<ZetaTail, TruncatedSum>;

inline constexpr double kMinExponent = 1.0 + 1e-6;

inline double power_series_sum(double n, const ConstantMethod& method) {
  if (!(n > kMinExponent))
    throw NumericError("series diverges: exponent " + fmt::full(n) +
                       " must exceed 1");
  return std::visit(
      [n](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ZetaTail>) {
          constexpr int P = 20;
          double head = 0.0;
          for (int x = P - 1; x >= 1; --x) head += std::pow(x, -n);
          const double p = P;
          const double tail = std::pow(p, 1.0 - n) / (n - 1.0) +
                              std::pow(p, -n) / 2.0 +
                              n * std::pow(p, -n - 1.0) / 12.0;
          return head + tail;
        } else {
          if (m.limit < 1)
            throw NumericError("truncated sum limit must be at least 1");
          // Smallest terms first.
          double sum = 0.0;
          for (std::int64_t x = m.limit; x >= 1; --x)
            sum += std::pow(static_cast<double>(x), -n);
          return sum;
        }
      },
      method);
}

// C = 1 / sum_{x>=1} x^-n (or the truncated sum, when requested).
inline double compute_constant(double n,
                               const ConstantMethod& method = ZetaTail{}) {
  return 1.0 / power_series_sum(n, method);
}

inline double expected_proportion(double n, double c, std::int64_t x) {
  if (x < 1)
    throw DataError("productivity level must be >= 1, got " +
                    std::to_string(x));
  return c * std::pow(static_cast<double>(x), -n);
}

struct ExpectedPoint {
  std::int64_t papers = 0;
  double proportion = 0.0;
};

inline std::vector<ExpectedPoint> expected_distribution(
    double n, double c, std::span<const std::int64_t> xs) {
  std::vector<ExpectedPoint> out;
  out.reserve(xs.size());
  for (auto x : xs) out.push_back({x, expected_proportion(n, c, x)});
  return out;
}

struct LotkaOptions {
  FitOptions fit;
  ConstantMethod constant_method = ZetaTail{};
  // The constant is looked up at the exponent rounded to this many decimals,
  // the way published tables of Lotka constants are indexed; the exponent
  // itself stays at full precision. nullopt evaluates C at the full exponent.
  std::optional<int> constant_decimals = 2;
};

// Exponent by least squares, then the normalizing constant.
inline LotkaFit fit_lotka(const ProductivityDistribution& dist,
                          const LotkaOptions& options = {}) {
  LotkaFit fit = fit_exponent_lsq(dist, options.fit);
  const double at = options.constant_decimals
                        ? fmt::round_to(fit.n, *options.constant_decimals)
                        : fit.n;
  fit.c_exponent = at;
  fit.c = compute_constant(at, options.constant_method);
  return fit;
}

}  // namespace lotka
