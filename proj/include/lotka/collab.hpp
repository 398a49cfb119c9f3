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

// Authorship pattern (papers binned by author count and period) and the
// basic collaboration measures derived from per-paper author counts.

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotka/corpus.hpp"
#include "lotka/error.hpp"
#include "lotka/format.hpp"

namespace lotka {

struct PeriodBin {
  int start_year = 0;  // inclusive
  int end_year = 0;    // inclusive

  std::string label() const {
    return std::to_string(start_year) + "-" + std::to_string(end_year);
  }
};

// Buckets 1..10 hold papers with exactly that many authors; bucket index 10
// (label ">10") holds the rest.
inline constexpr std::size_t kBucketCount = 11;

inline std::size_t bucket_for(std::size_t author_count) {
  return author_count > 10 ? 10 : author_count - 1;
}

inline std::string bucket_label(std::size_t bucket) {
  return bucket >= 10 ? std::string(">10") : std::to_string(bucket + 1);
}

struct AuthorshipPatternTable {
  std::vector<PeriodBin> periods;
  // counts[bucket][period]
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_totals;     // per bucket
  std::vector<std::int64_t> column_totals;  // per period
  std::int64_t grand_total = 0;

  double row_percent(std::size_t bucket) const {
    return 100.0 * static_cast<double>(row_totals[bucket]) /
           static_cast<double>(grand_total);
  }
  double column_percent(std::size_t period) const {
    return 100.0 * static_cast<double>(column_totals[period]) /
           static_cast<double>(grand_total);
  }
};

inline AuthorshipPatternTable authorship_pattern(
    const std::vector<PublicationRecord>& records, int period_length_years,
    int origin_year) {
  if (period_length_years < 1)
    throw DataError("period length must be at least one year");
  if (records.empty()) throw DataError("empty corpus");

  int max_year = origin_year;
  for (const auto& r : records) {
    if (r.year < origin_year)
      throw DataError("record '" + r.id + "' has year " +
                      std::to_string(r.year) + " before origin " +
                      std::to_string(origin_year));
    max_year = std::max(max_year, r.year);
  }

  AuthorshipPatternTable t;
  const int period_count = (max_year - origin_year) / period_length_years + 1;
  for (int k = 0; k < period_count; ++k) {
    const int start = origin_year + k * period_length_years;
    t.periods.push_back({start, start + period_length_years - 1});
  }
  t.counts.assign(kBucketCount, std::vector<std::int64_t>(t.periods.size()));
  t.row_totals.assign(kBucketCount, 0);
  t.column_totals.assign(t.periods.size(), 0);

  for (const auto& r : records) {
    const auto b = bucket_for(r.authors.size());
    const auto p =
        static_cast<std::size_t>((r.year - origin_year) / period_length_years);
    ++t.counts[b][p];
    ++t.row_totals[b];
    ++t.column_totals[p];
    ++t.grand_total;
  }
  return t;
}

inline int min_year(const std::vector<PublicationRecord>& records) {
  if (records.empty()) throw DataError("empty corpus");
  return std::min_element(records.begin(), records.end(),
                          [](const auto& a, const auto& b) {
                            return a.year < b.year;
                          })
      ->year;
}

struct CollabMetrics {
  std::int64_t single_count = 0;
  std::int64_t multi_count = 0;
  double degree_of_collaboration = 0.0;  // multi / total
  double collaborative_index = 0.0;      // mean authors per paper
};

inline CollabMetrics collab_metrics(
    const std::vector<PublicationRecord>& records) {
  if (records.empty()) throw DataError("empty corpus");
  CollabMetrics m;
  std::int64_t author_slots = 0;
  for (const auto& r : records) {
    if (r.authors.size() == 1)
      ++m.single_count;
    else
      ++m.multi_count;
    author_slots += static_cast<std::int64_t>(r.authors.size());
  }
  const auto total = static_cast<double>(records.size());
  m.degree_of_collaboration = static_cast<double>(m.multi_count) / total;
  m.collaborative_index = static_cast<double>(author_slots) / total;
  return m;
}

// Buckets as rows, periods as columns, then a total column and the bucket's
// share of all papers; a total row and a period-share row close the table.
// Percentages are rounded to 2 decimals here and nowhere else.
inline void write_pattern_csv(std::ostream& out,
                              const AuthorshipPatternTable& t,
                              const CollabMetrics& m) {
  out << "authors";
  for (const auto& p : t.periods) out << ',' << p.label();
  out << ",total,percent\n";
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    out << bucket_label(b);
    for (auto v : t.counts[b]) out << ',' << v;
    out << ',' << t.row_totals[b] << ',' << fmt::fixed(t.row_percent(b), 2)
        << '\n';
  }
  out << "total";
  for (auto v : t.column_totals) out << ',' << v;
  out << ',' << t.grand_total << ",100.00\n";
  out << "percent";
  for (std::size_t p = 0; p < t.periods.size(); ++p)
    out << ',' << fmt::fixed(t.column_percent(p), 2);
  out << ",100.00,\n";
  out << '\n';
  out << "degree_of_collaboration," << fmt::full(m.degree_of_collaboration)
      << '\n';
  out << "collaborative_index," << fmt::full(m.collaborative_index) << '\n';
}

inline nlohmann::ordered_json to_json(const AuthorshipPatternTable& t) {
  nlohmann::ordered_json j;
  auto& periods = j["periods"] = nlohmann::ordered_json::array();
  for (const auto& p : t.periods)
    periods.push_back({{"start", p.start_year}, {"end", p.end_year}});
  auto& rows = j["buckets"] = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < kBucketCount; ++b)
    rows.push_back({{"authors", bucket_label(b)},
                    {"counts", t.counts[b]},
                    {"total", t.row_totals[b]},
                    {"percent", t.row_percent(b)}});
  j["column_totals"] = t.column_totals;
  std::vector<double> col_pct;
  for (std::size_t p = 0; p < t.periods.size(); ++p)
    col_pct.push_back(t.column_percent(p));
  j["column_percent"] = col_pct;
  j["grand_total"] = t.grand_total;
  return j;
}

inline nlohmann::ordered_json to_json(const CollabMetrics& m) {
  return {{"single_count", m.single_count},
          {"multi_count", m.multi_count},
          {"degree_of_collaboration", m.degree_of_collaboration},
          {"collaborative_index", m.collaborative_index}};
}

}  // namespace lotka
