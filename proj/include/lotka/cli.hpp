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

// Command-line front end: ingest -> fit -> K-S -> report.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.
// Output is assembled in memory and written only on success, so a failing
// run leaves the primary output stream untouched.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lotka/collab.hpp"
#include "lotka/corpus.hpp"
#include "lotka/error.hpp"
#include "lotka/format.hpp"
#include "lotka/gof.hpp"
#include "lotka/law.hpp"

namespace lotka::cli {

enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, Numeric = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Ingest, Fit, Ks, Pattern, Report };
enum class KsVariant { Standard, Pointwise, Both };
enum class OutputFormat { Csv, Json };
enum class InputKind { Auto, Distribution, Records, JsonLines };

struct RunConfig {
  Command command = Command::Fit;
  std::string input_path;
  InputKind input_kind = InputKind::Auto;
  CountingMethod counting = CountingMethod::Complete;
  KsVariant ks_variant = KsVariant::Both;
  std::optional<double> coefficient;  // explicit or from a preset
  std::string coefficient_source;     // preset name or "explicit"
  ConstantMethod c_method = ZetaTail{};
  bool c_at_full_exponent = false;
  int period_length = 5;
  std::optional<int> origin_year;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::int64_t> truncate_x_max;
  CumulativeMode cumulative = CumulativeMode::ObservedOnly;
  std::optional<std::string> plot_csv_path;
};

// What the input file turned out to hold.
struct LoadedInput {
  std::optional<std::vector<PublicationRecord>> records;
  ProductivityDistribution distribution;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool looks_like_distribution_row(std::string_view line) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) return false;
  return fmt::parse_int<std::int64_t>(line.substr(0, comma)) &&
         fmt::parse_int<std::int64_t>(line.substr(comma + 1));
}

inline InputKind sniff(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = fmt::trim(raw);
    if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;
    if (line == "x,y" || looks_like_distribution_row(line))
      return InputKind::Distribution;
    if (line.front() == '{') return InputKind::JsonLines;
    return InputKind::Records;
  }
  return InputKind::Records;
}

inline std::string_view counting_name(CountingMethod m) {
  return m == CountingMethod::Straight ? "straight" : "complete";
}

inline std::string c_method_name(const ConstantMethod& m) {
  if (const auto* t = std::get_if<TruncatedSum>(&m))
    return "sum:" + std::to_string(t->limit);
  return "zeta";
}

inline LotkaOptions lotka_options(const RunConfig& cfg) {
  LotkaOptions o;
  o.fit.max_x = cfg.truncate_x_max;
  o.constant_method = cfg.c_method;
  if (cfg.c_at_full_exponent) o.constant_decimals.reset();
  return o;
}

inline double require_coefficient(const RunConfig& cfg) {
  if (!cfg.coefficient)
    throw UsageError(
        "a critical-value coefficient is required: pass --preset "
        "paper|alpha01|alpha05|alpha10 or --coefficient <real>");
  return *cfg.coefficient;
}

inline nlohmann::ordered_json fit_json(const LotkaFit& fit,
                                       const RunConfig& cfg,
                                       const ProductivityDistribution& d) {
  return {{"n", fit.n},
          {"n_display", fmt::fixed(fit.n, 2)},
          {"c", *fit.c},
          {"c_display", fmt::fixed(*fit.c, 4)},
          {"c_exponent", *fit.c_exponent},
          {"c_method", c_method_name(cfg.c_method)},
          {"slope", fit.slope},
          {"intercept", fit.intercept},
          {"sum_X", fit.sums.sum_x},
          {"sum_Y", fit.sums.sum_y},
          {"sum_XY", fit.sums.sum_xy},
          {"sum_X2", fit.sums.sum_x2},
          {"point_count", fit.sums.point_count},
          {"total_authors", d.total_authors()},
          {"total_contributions", d.total_contributions()}};
}

inline void write_fit_csv(std::ostream& out, const LotkaFit& fit,
                          const RunConfig& cfg,
                          const ProductivityDistribution& d) {
  out << "quantity,value,display\n";
  out << "n," << fmt::full(fit.n) << ',' << fmt::fixed(fit.n, 2) << '\n';
  out << "c," << fmt::full(*fit.c) << ',' << fmt::fixed(*fit.c, 4) << '\n';
  out << "c_exponent," << fmt::full(*fit.c_exponent) << ",\n";
  out << "c_method," << c_method_name(cfg.c_method) << ",\n";
  out << "slope," << fmt::full(fit.slope) << ",\n";
  out << "intercept," << fmt::full(fit.intercept) << ",\n";
  out << "sum_X," << fmt::full(fit.sums.sum_x) << ',' << fmt::fixed(fit.sums.sum_x, 4) << '\n';
  out << "sum_Y," << fmt::full(fit.sums.sum_y) << ',' << fmt::fixed(fit.sums.sum_y, 4) << '\n';
  out << "sum_XY," << fmt::full(fit.sums.sum_xy) << ',' << fmt::fixed(fit.sums.sum_xy, 4) << '\n';
  out << "sum_X2," << fmt::full(fit.sums.sum_x2) << ',' << fmt::fixed(fit.sums.sum_x2, 4) << '\n';
  out << "point_count," << fit.sums.point_count << ",\n";
  out << "total_authors," << d.total_authors() << ",\n";
  out << "total_contributions," << d.total_contributions() << ",\n";
}

inline bool shows_standard(KsVariant v) { return v != KsVariant::Pointwise; }
inline bool shows_pointwise(KsVariant v) { return v != KsVariant::Standard; }

inline nlohmann::ordered_json ks_summary_json(const KSResult& r,
                                              const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["c"] = r.c;
  if (shows_standard(cfg.ks_variant)) {
    j["d_max_cumulative"] = r.d_max_cumulative;
    j["d_max_cumulative_display"] = fmt::fixed(r.d_max_cumulative, 4);
    j["d_max_cumulative_at_x"] = r.cumulative_at_x;
    j["conforms_cumulative"] = r.conforms_cumulative;
  }
  if (shows_pointwise(cfg.ks_variant)) {
    j["d_max_pointwise"] = r.d_max_pointwise;
    j["d_max_pointwise_display"] = fmt::fixed(r.d_max_pointwise, 4);
    j["d_max_pointwise_at_x"] = r.pointwise_at_x;
    j["conforms_pointwise"] = r.conforms_pointwise;
  }
  j["critical_value"] = r.critical_value;
  j["critical_value_display"] = fmt::fixed(r.critical_value, 4);
  j["coefficient"] = r.coefficient;
  j["coefficient_source"] = cfg.coefficient_source;
  j["total_authors"] = r.total_authors;
  j["cumulative_mode"] =
      r.mode == CumulativeMode::Dense ? "dense" : "observed";
  return j;
}

inline void write_ks_summary_csv(std::ostream& out, const KSResult& r,
                                 const RunConfig& cfg) {
  auto verdict = [](bool ok) { return ok ? "conforms" : "does_not_conform"; };
  out << "statistic,value,display\n";
  out << "n," << fmt::full(r.n) << ',' << fmt::fixed(r.n, 2) << '\n';
  out << "c," << fmt::full(r.c) << ',' << fmt::fixed(r.c, 4) << '\n';
  if (shows_standard(cfg.ks_variant)) {
    out << "d_max_cumulative," << fmt::full(r.d_max_cumulative) << ','
        << fmt::fixed(r.d_max_cumulative, 4) << '\n';
    out << "d_max_cumulative_at_x," << r.cumulative_at_x << ",\n";
    out << "verdict_cumulative," << verdict(r.conforms_cumulative) << ",\n";
  }
  if (shows_pointwise(cfg.ks_variant)) {
    out << "d_max_pointwise," << fmt::full(r.d_max_pointwise) << ','
        << fmt::fixed(r.d_max_pointwise, 4) << '\n';
    out << "d_max_pointwise_at_x," << r.pointwise_at_x << ",\n";
    out << "verdict_pointwise," << verdict(r.conforms_pointwise) << ",\n";
  }
  out << "critical_value," << fmt::full(r.critical_value) << ','
      << fmt::fixed(r.critical_value, 4) << '\n';
  out << "coefficient," << fmt::full(r.coefficient) << ','
      << cfg.coefficient_source << '\n';
  out << "total_authors," << r.total_authors << ",\n";
}

struct PlotRow {
  double log_x;
  double log_y_observed;
  double log_y_expected;  // log10(expected proportion * total authors)
};

inline std::vector<PlotRow> plot_rows(const KSResult& r) {
  std::vector<PlotRow> rows;
  const auto total = static_cast<double>(r.total_authors);
  for (const auto& row : r.report)
    rows.push_back({std::log10(static_cast<double>(row.x)),
                    std::log10(static_cast<double>(row.y)),
                    std::log10(row.expected_proportion * total)});
  return rows;
}

inline void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "log10_x,log10_y_observed,log10_y_expected\n";
  for (const auto& r : rows)
    out << fmt::full(r.log_x) << ',' << fmt::full(r.log_y_observed) << ','
        << fmt::full(r.log_y_expected) << '\n';
}

}  // namespace detail

inline LoadedInput load_input(const RunConfig& cfg) {
  const auto text = detail::read_file(cfg.input_path);
  auto kind = cfg.input_kind;
  if (kind == InputKind::Auto) kind = detail::sniff(text);
  if (kind == InputKind::Distribution)
    return {std::nullopt, load_distribution(text)};
  auto records = parse_records(text, kind == InputKind::JsonLines
                                         ? RecordFormat::RecordPerLine
                                         : RecordFormat::DelimitedRows);
  auto dist = count_productivity(records, cfg.counting);
  return {std::move(records), std::move(dist)};
}

inline void cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_input(cfg);
  const auto& d = in.distribution;
  if (cfg.format == OutputFormat::Csv) {
    write_distribution(out, d);
    return;
  }
  nlohmann::ordered_json j;
  j["source"] = in.records ? "records" : "distribution";
  if (in.records) {
    j["records"] = in.records->size();
    j["counting"] = detail::counting_name(cfg.counting);
  }
  j["total_authors"] = d.total_authors();
  j["total_contributions"] = d.total_contributions();
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : d.points())
    pts.push_back({{"x", p.papers}, {"y", p.authors}});
  out << j.dump(2) << '\n';
}

inline void cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_input(cfg);
  const auto fit = fit_lotka(in.distribution, detail::lotka_options(cfg));
  if (cfg.format == OutputFormat::Json)
    out << detail::fit_json(fit, cfg, in.distribution).dump(2) << '\n';
  else
    detail::write_fit_csv(out, fit, cfg, in.distribution);
}

inline void cmd_ks(const RunConfig& cfg, std::ostream& out) {
  const double coefficient = detail::require_coefficient(cfg);
  const auto in = load_input(cfg);
  const auto fit = fit_lotka(in.distribution, detail::lotka_options(cfg));
  const auto r =
      run_ks(in.distribution, fit.n, *fit.c, coefficient, cfg.cumulative);
  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json j;
    j["fit"] = detail::fit_json(fit, cfg, in.distribution);
    j["ks"] = detail::ks_summary_json(r, cfg);
    auto& rows = j["report"] = nlohmann::ordered_json::array();
    for (const auto& row : r.report) rows.push_back(to_json(row));
    out << j.dump(2) << '\n';
  } else {
    write_ks_report_csv(out, r.report);
    out << '\n';
    detail::write_ks_summary_csv(out, r, cfg);
  }
}

inline void cmd_pattern(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_input(cfg);
  if (!in.records) throw DataError("pattern requires records");
  const auto& recs = *in.records;
  const int origin = cfg.origin_year.value_or(min_year(recs));
  const auto table = authorship_pattern(recs, cfg.period_length, origin);
  const auto m = collab_metrics(recs);
  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json j;
    j["pattern"] = to_json(table);
    j["collaboration"] = to_json(m);
    out << j.dump(2) << '\n';
  } else {
    write_pattern_csv(out, table, m);
  }
}

// Combined JSON document; the plot table is embedded and, with
// --plot-csv, also written as CSV. Returns the plot CSV text.
inline std::string cmd_report(const RunConfig& cfg, std::ostream& out) {
  const double coefficient = detail::require_coefficient(cfg);
  const auto in = load_input(cfg);
  const auto& d = in.distribution;
  const auto fit = fit_lotka(d, detail::lotka_options(cfg));
  const auto r = run_ks(d, fit.n, *fit.c, coefficient, cfg.cumulative);
  const auto plot = detail::plot_rows(r);

  nlohmann::ordered_json j;
  j["input"] = {{"source", in.records ? "records" : "distribution"},
                {"points", d.size()},
                {"total_authors", d.total_authors()},
                {"total_contributions", d.total_contributions()}};
  if (in.records) {
    j["input"]["records"] = in.records->size();
    j["input"]["counting"] = detail::counting_name(cfg.counting);
  }
  j["fit"] = detail::fit_json(fit, cfg, d);
  j["ks"] = detail::ks_summary_json(r, cfg);
  auto& rows = j["ks_report"] = nlohmann::ordered_json::array();
  for (const auto& row : r.report) rows.push_back(to_json(row));
  auto& pj = j["plot"] = nlohmann::ordered_json::array();
  for (const auto& p : plot)
    pj.push_back({{"log10_x", p.log_x},
                  {"log10_y_observed", p.log_y_observed},
                  {"log10_y_expected", p.log_y_expected}});
  if (in.records) {
    const auto& recs = *in.records;
    const int origin = cfg.origin_year.value_or(min_year(recs));
    j["pattern"] = to_json(authorship_pattern(recs, cfg.period_length, origin));
    j["collaboration"] = to_json(collab_metrics(recs));
  }
  out << j.dump(2) << '\n';

  std::ostringstream plot_csv;
  detail::write_plot_csv(plot_csv, plot);
  return plot_csv.str();
}

namespace detail {

inline ConstantMethod parse_c_method(const std::string& s) {
  if (s == "zeta") return ZetaTail{};
  if (s.starts_with("sum:")) {
    const auto limit = fmt::parse_int<std::int64_t>(std::string_view(s).substr(4));
    if (limit && *limit >= 1) return TruncatedSum{*limit};
  }
  throw UsageError("--c-method must be 'zeta' or 'sum:<limit>' with limit >= 1");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Lotka's law fitting and Kolmogorov-Smirnov conformity for "
               "author-productivity data",
               "lotka"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string input_kind = "auto";
  std::string counting = "complete";
  std::string ks_variant = "both";
  std::optional<double> coefficient;
  std::string preset;
  std::string c_method = "zeta";
  std::string format = "csv";
  std::optional<int> origin;
  std::optional<std::int64_t> truncate;
  std::string plot_csv;
  bool dense = false;

  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::Ingest, "ingest", "Build a productivity table (x,y) from the input"},
      {Command::Fit, "fit", "Estimate the Lotka exponent and constant"},
      {Command::Ks, "ks", "K-S conformity report against the fitted law"},
      {Command::Pattern, "pattern", "Authorship pattern table from records"},
      {Command::Report, "report", "Combined JSON report plus plot data"},
  };
  std::vector<std::pair<CLI::App*, Command>> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    commands.emplace_back(sub, s.command);
    sub->add_option("--input", cfg.input_path, "Records or distribution file")
        ->required();
    sub->add_option("--input-kind", input_kind,
                    "auto|distribution|records|jsonl")
        ->check(CLI::IsMember({"auto", "distribution", "records", "jsonl"}));
    sub->add_option("--counting", counting, "complete|straight")
        ->check(CLI::IsMember({"complete", "straight"}));
    sub->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--truncate-x", truncate,
                    "Ignore rows with x above this when fitting");
    sub->add_option("--c-method", c_method, "zeta|sum:<limit>");
    sub->add_flag("--c-at-full-n", cfg.c_at_full_exponent,
                  "Evaluate the constant at the unrounded exponent");
    sub->add_option("--period", cfg.period_length, "Period length in years")
        ->check(CLI::PositiveNumber);
    sub->add_option("--origin", origin, "First year of the first period");
    if (s.command == Command::Ks || s.command == Command::Report) {
      sub->add_option("--ks-variant", ks_variant, "standard|pointwise|both")
          ->check(CLI::IsMember({"standard", "pointwise", "both"}));
      auto* c = sub->add_option("--coefficient", coefficient,
                                "Critical-value coefficient (c / sqrt(N))");
      auto* p = sub->add_option("--preset", preset,
                                "paper (2.54)|alpha01 (1.63)|alpha05 (1.36)|"
                                "alpha10 (1.22)")
                    ->check(CLI::IsMember({"paper", "alpha01", "alpha05",
                                           "alpha10"}));
      c->excludes(p);
      sub->add_flag("--dense-cumulative", dense,
                    "Accumulate expected mass over every integer up to x");
    }
    if (s.command == Command::Report)
      sub->add_option("--plot-csv", plot_csv, "Write log-log plot data here");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  }

  CLI::App* chosen = nullptr;
  for (const auto& [sub, command] : commands)
    if (sub->parsed()) {
      chosen = sub;
      cfg.command = command;
    }
  if (chosen == nullptr) {
    err << app.help();
    return static_cast<int>(ExitCode::Usage);
  }

  std::ostringstream buffer;
  try {
    if (input_kind == "distribution") cfg.input_kind = InputKind::Distribution;
    if (input_kind == "records") cfg.input_kind = InputKind::Records;
    if (input_kind == "jsonl") cfg.input_kind = InputKind::JsonLines;
    cfg.counting = counting == "straight" ? CountingMethod::Straight
                                          : CountingMethod::Complete;
    cfg.ks_variant = ks_variant == "standard"    ? KsVariant::Standard
                     : ks_variant == "pointwise" ? KsVariant::Pointwise
                                                 : KsVariant::Both;
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    cfg.c_method = detail::parse_c_method(c_method);
    cfg.origin_year = origin;
    cfg.truncate_x_max = truncate;
    if (dense) cfg.cumulative = CumulativeMode::Dense;
    if (coefficient) {
      if (!(*coefficient > 0.0) || !std::isfinite(*coefficient))
        throw UsageError("--coefficient must be a positive number");
      cfg.coefficient = coefficient;
      cfg.coefficient_source = "explicit";
    } else if (!preset.empty()) {
      cfg.coefficient = preset_coefficient(*parse_preset(preset));
      cfg.coefficient_source = preset;
    }
    if (!plot_csv.empty()) cfg.plot_csv_path = plot_csv;

    std::string plot_text;
    switch (cfg.command) {
      case Command::Ingest: cmd_ingest(cfg, buffer); break;
      case Command::Fit: cmd_fit(cfg, buffer); break;
      case Command::Ks: cmd_ks(cfg, buffer); break;
      case Command::Pattern: cmd_pattern(cfg, buffer); break;
      case Command::Report: plot_text = cmd_report(cfg, buffer); break;
    }
    if (cfg.plot_csv_path) {
      std::ofstream f(*cfg.plot_csv_path, std::ios::binary);
      if (!f) throw DataError("cannot write '" + *cfg.plot_csv_path + "'");
      f << plot_text;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Numeric);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  }
  out << buffer.str();
  return static_cast<int>(ExitCode::Ok);
}

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace lotka::cli
