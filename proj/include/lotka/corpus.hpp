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

// Bibliographic record ingestion and author-productivity distributions.
//
// Records come from one of two text formats:
//
//   DelimitedRows   id|year|authors, authors separated by ';'. An optional
//                   first line "id|year|authors" is treated as a header.
//   RecordPerLine   JSON lines, one object per line:
//                   {"id":"P1","year":2005,"authors":["Smith J","Jones K"]}
//
// Author names are trimmed and internal whitespace runs collapse to a single
// space; empty tokens are dropped. Two names denote the same author iff the
// normalized strings are equal.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lotka/error.hpp"
#include "lotka/format.hpp"

namespace lotka {

struct PublicationRecord {
  std::string id;
  int year = 0;
  std::vector<std::string> authors;  // first author first

  friend bool operator==(const PublicationRecord&,
                         const PublicationRecord&) = default;
};

enum class CountingMethod {
  Complete,  // every listed author gets one credit ("total counting")
  Straight,  // first listed author only
};

enum class RecordFormat { DelimitedRows, RecordPerLine };

// One row of a productivity table: `authors` distinct authors each credited
// with exactly `papers` contributions.
struct ProductivityPoint {
  std::int64_t papers = 0;
  std::int64_t authors = 0;

  friend bool operator==(const ProductivityPoint&,
                         const ProductivityPoint&) = default;
};

struct Provenance {
  enum class Kind { FromRecords, Loaded, Synthetic };
  Kind kind = Kind::Loaded;
  CountingMethod method = CountingMethod::Complete;  // FromRecords only
};

// (x, y) frequency table with strictly increasing x >= 1 and y >= 1.
// Immutable once built.
class ProductivityDistribution {
 public:
  explicit ProductivityDistribution(std::vector<ProductivityPoint> points,
                                    Provenance provenance = {})
      : points_(std::move(points)), provenance_(provenance) {
    if (points_.empty())
      throw DataError("productivity distribution has no rows");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (p.papers < 1 || p.authors < 1)
        throw DataError("productivity row x=" + std::to_string(p.papers) +
                        ", y=" + std::to_string(p.authors) +
                        ": x and y must be positive");
      if (i > 0 && points_[i - 1].papers >= p.papers)
        throw DataError("productivity rows must have strictly increasing x");
    }
  }

  const std::vector<ProductivityPoint>& points() const { return points_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return points_.size(); }

  std::int64_t total_authors() const {
    std::int64_t s = 0;
    for (const auto& p : points_) s += p.authors;
    return s;
  }

  std::int64_t total_contributions() const {
    std::int64_t s = 0;
    for (const auto& p : points_) s += p.papers * p.authors;
    return s;
  }

  friend bool operator==(const ProductivityDistribution& a,
                         const ProductivityDistribution& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<ProductivityPoint> points_;
  Provenance provenance_;
};

namespace detail {

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates, out of range.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += len;
  }
  return true;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string line_error(std::size_t line, std::string_view what) {
  return "line " + std::to_string(line) + ": " + std::string(what);
}

}  // namespace detail

// Trims and collapses internal whitespace to single spaces.
inline std::string normalize_author(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  for (char ch : name) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' ||
        ch == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

inline std::vector<PublicationRecord> parse_records(std::istream& in,
                                                    RecordFormat format) {
  std::vector<PublicationRecord> records;
  std::unordered_map<std::string, std::size_t> id_line;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_content = false;

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    if (!detail::valid_utf8(raw))
      throw DataError(detail::line_error(line_no, "invalid UTF-8"));
    const auto line = fmt::trim(raw);
    if (line.empty()) continue;

    PublicationRecord rec;
    std::vector<std::string> raw_authors;
    const bool first_row = !seen_content;
    seen_content = true;

    if (format == RecordFormat::DelimitedRows) {
      if (first_row && line == "id|year|authors") continue;
      const auto cols = detail::split(line, '|');
      if (cols.size() != 3)
        throw DataError(detail::line_error(
            line_no, "expected 3 '|'-separated columns (id|year|authors), found " +
                         std::to_string(cols.size())));
      rec.id = std::string(fmt::trim(cols[0]));
      const auto year = fmt::parse_int<int>(cols[1]);
      if (!year)
        throw DataError(detail::line_error(
            line_no, "year '" + std::string(fmt::trim(cols[1])) +
                         "' is not an integer"));
      rec.year = *year;
      for (auto tok : detail::split(cols[2], ';'))
        raw_authors.emplace_back(tok);
    } else {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(detail::line_error(line_no, e.what()));
      }
      if (!j.is_object() || !j.contains("id") || !j.contains("year") ||
          !j.contains("authors") || !j["id"].is_string() ||
          !j["year"].is_number_integer() || !j["authors"].is_array())
        throw DataError(detail::line_error(
            line_no,
            "expected object with string id, integer year, authors array"));
      rec.id = j["id"].get<std::string>();
      const auto year = j["year"].get<std::int64_t>();
      if (year < INT32_MIN || year > INT32_MAX)
        throw DataError(detail::line_error(line_no, "year out of range"));
      rec.year = static_cast<int>(year);
      for (const auto& a : j["authors"]) {
        if (!a.is_string())
          throw DataError(detail::line_error(line_no, "author must be a string"));
        raw_authors.push_back(a.get<std::string>());
      }
    }

    if (rec.id.empty())
      throw DataError(detail::line_error(line_no, "empty id"));
    if (rec.year <= 0)
      throw DataError(detail::line_error(
          line_no, "year must be positive, got " + std::to_string(rec.year)));
    for (const auto& a : raw_authors) {
      auto name = normalize_author(a);
      if (!name.empty()) rec.authors.push_back(std::move(name));
    }
    if (rec.authors.empty())
      throw DataError(detail::line_error(
          line_no, "record '" + rec.id + "' has no authors"));

    const auto [it, inserted] = id_line.emplace(rec.id, line_no);
    if (!inserted)
      throw DataError("duplicate id '" + rec.id + "' on lines " +
                      std::to_string(it->second) + " and " +
                      std::to_string(line_no));
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<PublicationRecord> parse_records(std::string_view text,
                                                    RecordFormat format) {
  std::istringstream in{std::string(text)};
  return parse_records(in, format);
}

// JSON-lines writer; parse_records(..., RecordPerLine) reads it back.
inline void write_records(std::ostream& out,
                          const std::vector<PublicationRecord>& records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["year"] = r.year;
    j["authors"] = r.authors;
    out << j.dump() << '\n';
  }
}

inline ProductivityDistribution count_productivity(
    const std::vector<PublicationRecord>& records, CountingMethod method) {
  if (records.empty()) throw DataError("empty corpus");

  std::unordered_map<std::string_view, std::int64_t> tally;
  for (const auto& r : records) {
    if (method == CountingMethod::Straight) {
      ++tally[r.authors.front()];
    } else {
      for (const auto& a : r.authors) ++tally[a];
    }
  }

  std::map<std::int64_t, std::int64_t> by_papers;
  for (const auto& [name, papers] : tally) ++by_papers[papers];

  std::vector<ProductivityPoint> points;
  points.reserve(by_papers.size());
  for (const auto& [x, y] : by_papers) points.push_back({x, y});
  return ProductivityDistribution(
      std::move(points), {Provenance::Kind::FromRecords, method});
}

// Two-column "x,y" table. Header optional; rows may come in any order.
inline ProductivityDistribution load_distribution(std::istream& in) {
  std::vector<ProductivityPoint> points;
  std::map<std::int64_t, std::size_t> x_line;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    const auto line = fmt::trim(raw);
    if (line.empty()) continue;
    const bool first_row = !seen_content;
    seen_content = true;
    if (first_row && line == "x,y") continue;

    const auto cols = detail::split(line, ',');
    if (cols.size() != 2)
      throw DataError(detail::line_error(line_no, "expected two columns x,y"));
    const auto x = fmt::parse_int<std::int64_t>(cols[0]);
    const auto y = fmt::parse_int<std::int64_t>(cols[1]);
    if (!x || !y)
      throw DataError(detail::line_error(line_no, "x and y must be integers"));
    if (*x < 1 || *y < 1)
      throw DataError(detail::line_error(
          line_no, "x and y must be positive (omit zero-count rows)"));
    const auto [it, inserted] = x_line.emplace(*x, line_no);
    if (!inserted)
      throw DataError("duplicate x=" + std::to_string(*x) + " on lines " +
                      std::to_string(it->second) + " and " +
                      std::to_string(line_no));
    points.push_back({*x, *y});
  }
  if (points.empty()) throw DataError("distribution file has no rows");
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.papers < b.papers; });
  return ProductivityDistribution(std::move(points),
                                  {Provenance::Kind::Loaded});
}

inline ProductivityDistribution load_distribution(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_distribution(in);
}

inline void write_distribution(std::ostream& out,
                               const ProductivityDistribution& dist) {
  out << "x,y\n";
  for (const auto& p : dist.points()) out << p.papers << ',' << p.authors << '\n';
}

}  // namespace lotka
