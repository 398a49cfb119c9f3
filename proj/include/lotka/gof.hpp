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

// Kolmogorov-Smirnov style conformity of an observed productivity table to a
// fitted Lotka law.
//
// Two statistics are computed over the same report:
//   cumulative  max_x |F_obs(x) - F_exp(x)|       (textbook one-sample K-S)
//   pointwise   max_x (f_obs(x) - f_exp(x))      (signed, not absolute)
// The pointwise form is the one behind published Lotka K-S tables whose
// "Diff" column is a difference of per-row proportions. Since it takes the
// signed maximum, a large negative gap (observed below expected) never sets
// the statistic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lotka/corpus.hpp"
#include "lotka/error.hpp"
#include "lotka/format.hpp"
#include "lotka/law.hpp"

namespace lotka {

struct KSReportRow {
  std::int64_t x = 0;
  std::int64_t y = 0;
  double observed_proportion = 0.0;  // y / sum(y)
  double observed_cumulative = 0.0;
  double expected_proportion = 0.0;  // c * x^-n
  double expected_cumulative = 0.0;
  double pointwise_diff = 0.0;   // observed - expected
  double cumulative_diff = 0.0;  // observed_cumulative - expected_cumulative
};

enum class CumulativeMode {
  ObservedOnly,  // accumulate expected mass over observed x only
  Dense,         // accumulate expected mass over every integer 1..x
};

inline std::vector<KSReportRow> ks_report(
    const ProductivityDistribution& dist, double n, double c,
    CumulativeMode mode = CumulativeMode::ObservedOnly) {
  const auto total = dist.total_authors();
  std::vector<KSReportRow> rows;
  rows.reserve(dist.size());

  std::int64_t running_y = 0;
  double expected_cum = 0.0;
  std::int64_t dense_upto = 0;
  for (const auto& p : dist.points()) {
    KSReportRow r;
    r.x = p.papers;
    r.y = p.authors;
    running_y += p.authors;
    r.observed_proportion =
        static_cast<double>(p.authors) / static_cast<double>(total);
    r.observed_cumulative =
        static_cast<double>(running_y) / static_cast<double>(total);
    r.expected_proportion = expected_proportion(n, c, p.papers);
    if (mode == CumulativeMode::Dense) {
      for (auto k = dense_upto + 1; k <= p.papers; ++k)
        expected_cum += expected_proportion(n, c, k);
      dense_upto = p.papers;
    } else {
      expected_cum += r.expected_proportion;
    }
    r.expected_cumulative = expected_cum;
    r.pointwise_diff = r.observed_proportion - r.expected_proportion;
    r.cumulative_diff = r.observed_cumulative - r.expected_cumulative;
    rows.push_back(r);
  }
  return rows;
}

namespace detail {

inline void require_rows(std::span<const KSReportRow> report) {
  if (report.empty()) throw DataError("K-S report has no rows");
}

}  // namespace detail

// Row attaining the signed pointwise maximum (first one on ties).
inline const KSReportRow& pointwise_argmax(std::span<const KSReportRow> report) {
  detail::require_rows(report);
  return *std::max_element(report.begin(), report.end(),
                           [](const auto& a, const auto& b) {
                             return a.pointwise_diff < b.pointwise_diff;
                           });
}

inline const KSReportRow& cumulative_argmax(
    std::span<const KSReportRow> report) {
  detail::require_rows(report);
  return *std::max_element(report.begin(), report.end(),
                           [](const auto& a, const auto& b) {
                             return std::abs(a.cumulative_diff) <
                                    std::abs(b.cumulative_diff);
                           });
}

inline double ks_statistic_pointwise(std::span<const KSReportRow> report) {
  return pointwise_argmax(report).pointwise_diff;
}

inline double ks_statistic_cumulative(std::span<const KSReportRow> report) {
  return std::abs(cumulative_argmax(report).cumulative_diff);
}

enum class CriticalPreset { Paper, Alpha01, Alpha05, Alpha10 };

inline double preset_coefficient(CriticalPreset p) {
  switch (p) {
    case CriticalPreset::Paper: return 2.54;
    case CriticalPreset::Alpha01: return 1.63;
    case CriticalPreset::Alpha05: return 1.36;
    case CriticalPreset::Alpha10: return 1.22;
  }
  return 0.0;
}

inline std::optional<CriticalPreset> parse_preset(std::string_view name) {
  if (name == "paper") return CriticalPreset::Paper;
  if (name == "alpha01") return CriticalPreset::Alpha01;
  if (name == "alpha05") return CriticalPreset::Alpha05;
  if (name == "alpha10") return CriticalPreset::Alpha10;
  return std::nullopt;
}

// Large-sample K-S threshold: coefficient / sqrt(N).
inline double critical_value(std::int64_t total_authors, double coefficient) {
  if (total_authors < 1)
    throw DataError("critical value needs at least one author");
  if (!(coefficient > 0.0) || !std::isfinite(coefficient))
    throw DataError("critical-value coefficient must be positive, got " +
                    fmt::full(coefficient));
  return coefficient / std::sqrt(static_cast<double>(total_authors));
}

struct KSResult {
  double n = 0.0;
  double c = 0.0;
  double d_max_cumulative = 0.0;
  double d_max_pointwise = 0.0;
  std::int64_t cumulative_at_x = 0;
  std::int64_t pointwise_at_x = 0;
  double critical_value = 0.0;
  double coefficient = 0.0;
  std::int64_t total_authors = 0;
  bool conforms_cumulative = false;
  bool conforms_pointwise = false;
  CumulativeMode mode = CumulativeMode::ObservedOnly;
  std::vector<KSReportRow> report;
};

inline KSResult run_ks(const ProductivityDistribution& dist, double n,
                       double c, double coefficient,
                       CumulativeMode mode = CumulativeMode::ObservedOnly) {
  KSResult r;
  r.n = n;
  r.c = c;
  r.mode = mode;
  r.coefficient = coefficient;
  r.total_authors = dist.total_authors();
  r.critical_value = critical_value(r.total_authors, coefficient);
  r.report = ks_report(dist, n, c, mode);

  const auto& pw = pointwise_argmax(r.report);
  const auto& cu = cumulative_argmax(r.report);
  r.d_max_pointwise = pw.pointwise_diff;
  r.pointwise_at_x = pw.x;
  r.d_max_cumulative = std::abs(cu.cumulative_diff);
  r.cumulative_at_x = cu.x;
  r.conforms_cumulative = r.d_max_cumulative <= r.critical_value;
  r.conforms_pointwise = std::abs(r.d_max_pointwise) <= r.critical_value;
  return r;
}

// CSV in the column order of a classic Lotka K-S table, plus the cumulative
// difference as a trailing column. Full precision.
inline void write_ks_report_csv(std::ostream& out,
                                std::span<const KSReportRow> report) {
  out << "x,y,observed,observed_cumulative,expected,expected_cumulative,"
         "pointwise_diff,cumulative_diff\n";
  for (const auto& r : report) {
    out << r.x << ',' << r.y << ',' << fmt::full(r.observed_proportion) << ','
        << fmt::full(r.observed_cumulative) << ','
        << fmt::full(r.expected_proportion) << ','
        << fmt::full(r.expected_cumulative) << ','
        << fmt::full(r.pointwise_diff) << ',' << fmt::full(r.cumulative_diff)
        << '\n';
  }
}

inline nlohmann::ordered_json to_json(const KSReportRow& r) {
  return {{"x", r.x},
          {"y", r.y},
          {"observed", r.observed_proportion},
          {"observed_cumulative", r.observed_cumulative},
          {"expected", r.expected_proportion},
          {"expected_cumulative", r.expected_cumulative},
          {"pointwise_diff", r.pointwise_diff},
          {"cumulative_diff", r.cumulative_diff}};
}

// Summary fields only; the per-row report is serialized separately.
inline nlohmann::ordered_json to_json(const KSResult& r) {
  return {{"n", r.n},
          {"c", r.c},
          {"d_max_cumulative", r.d_max_cumulative},
          {"d_max_cumulative_at_x", r.cumulative_at_x},
          {"d_max_pointwise", r.d_max_pointwise},
          {"d_max_pointwise_at_x", r.pointwise_at_x},
          {"critical_value", r.critical_value},
          {"coefficient", r.coefficient},
          {"total_authors", r.total_authors},
          {"conforms_cumulative", r.conforms_cumulative},
          {"conforms_pointwise", r.conforms_pointwise},
          {"cumulative_mode",
           r.mode == CumulativeMode::Dense ? "dense" : "observed"}};
}

}  // namespace lotka
