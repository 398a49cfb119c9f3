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

// Deterministic synthetic productivity tables drawn from a Lotka law
// truncated to 1..x_max.
//
// Generator contract (reimplementations must match it to reproduce streams):
//   * state: xoshiro256** (Blackman & Vigna, 2018), four 64-bit words
//     filled by four successive SplitMix64 outputs starting from `seed`;
//   * uniform: u = (next() >> 11) * 2^-53, so u is in [0, 1);
//   * draw: the smallest x with u < F(x), where F is the cumulative sum of
//     p(x) = x^-n / S in increasing x, S = sum_{k=1..x_max} k^-n summed from
//     k = x_max down to 1, and F(x_max) is pinned to exactly 1.
// Streams are bit-identical wherever std::pow is correctly rounded for the
// arguments involved (true for glibc on x86-64 and aarch64).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "lotka/corpus.hpp"
#include "lotka/error.hpp"
#include "lotka/format.hpp"
#include "lotka/law.hpp"

namespace lotka {

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

struct SynthSpec {
  double n = 2.0;
  std::int64_t author_count = 1000;
  std::int64_t x_max = 100;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_synth_args(double n, std::int64_t author_count,
                             std::int64_t x_max) {
  if (x_max < 2) throw DataError("x_max must be at least 2");
  if (author_count < 1) throw DataError("author_count must be positive");
  if (!(n > kMinExponent))
    throw NumericError("exponent must exceed 1, got " + fmt::full(n));
}

}  // namespace detail

// p(x) for x = 1..x_max (index x-1); the last entry absorbs the rounding
// remainder so the probabilities sum to exactly 1.
inline std::vector<double> truncated_probabilities(double n,
                                                   std::int64_t x_max) {
  const double c_t = compute_constant(n, TruncatedSum{x_max});
  std::vector<double> p(static_cast<std::size_t>(x_max));
  double head = 0.0;
  for (std::int64_t x = 1; x < x_max; ++x) {
    p[x - 1] = c_t * std::pow(static_cast<double>(x), -n);
    head += p[x - 1];
  }
  p.back() = std::max(0.0, 1.0 - head);
  return p;
}

inline ProductivityDistribution sample_distribution(const SynthSpec& spec) {
  detail::check_synth_args(spec.n, spec.author_count, spec.x_max);
  const auto p = truncated_probabilities(spec.n, spec.x_max);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Xoshiro256StarStar rng(spec.seed);
  std::vector<std::int64_t> hits(p.size(), 0);
  for (std::int64_t a = 0; a < spec.author_count; ++a) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++hits[static_cast<std::size_t>(it - cdf.begin())];
  }

  std::vector<ProductivityPoint> points;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits[i] > 0)
      points.push_back({static_cast<std::int64_t>(i + 1), hits[i]});
  return ProductivityDistribution(std::move(points),
                                  {Provenance::Kind::Synthetic});
}

// Noiseless table: y(x) = round(author_count * p(x)), zero rows dropped.
inline ProductivityDistribution exact_distribution(double n,
                                                   std::int64_t author_count,
                                                   std::int64_t x_max) {
  detail::check_synth_args(n, author_count, x_max);
  const auto p = truncated_probabilities(n, x_max);
  std::vector<ProductivityPoint> points;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto y =
        std::llround(static_cast<double>(author_count) * p[i]);
    if (y > 0) points.push_back({static_cast<std::int64_t>(i + 1), y});
  }
  if (points.empty())
    throw DataError("every productivity level rounds to zero authors");
  return ProductivityDistribution(std::move(points),
                                  {Provenance::Kind::Synthetic});
}

}  // namespace lotka
