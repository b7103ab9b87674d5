/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Experiment runners and versioned report emission.
//
// Every runner produces an ExperimentReport: a flat list of rows over one
// fixed, versioned schema. CSV and JSON emissions are generated from the
// same field list, so they agree field-by-field; inapplicable fields are
// empty cells in CSV and null in JSON. Rows record the child seed needed to
// regenerate their instance. Bound violations are never silently dropped:
// the row's note starts with "VIOLATION:" and report_has_violations() picks
// them up (the CLI exits 2 on any).

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rqaoa/analytic.hpp"
#include "rqaoa/elimination.hpp"
#include "rqaoa/exact.hpp"
#include "rqaoa/graphs.hpp"
#include "rqaoa/model.hpp"
#include "rqaoa/statevector.hpp"

namespace rqaoa {

struct ReportRow {
  std::string experiment;
  int row = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::string graph;
  std::optional<int> n_c;
  std::optional<int> level;
  std::optional<double> qaoa_energy;
  std::optional<double> rqaoa_energy;
  std::optional<double> local_energy;
  std::optional<double> denominator;
  std::string denominator_kind;   // "exact", "best_found" or ""
  std::optional<double> qaoa_ratio;
  std::optional<double> rqaoa_ratio;
  std::optional<double> local_ratio;
  std::optional<double> bound;
  std::optional<double> achieved;
  std::optional<bool> saturated;
  std::string note;
  double wallclock_ms = 0.0;
};

struct ExperimentReport {
  static constexpr int schema_version = 1;
  std::string experiment_id;
  std::vector<ReportRow> rows;
};

namespace detail {

using FieldValue =
    std::variant<std::monostate, std::int64_t, std::uint64_t, double, bool, std::string>;

// The one place the row schema is spelled out; both emitters consume it.
inline std::vector<std::pair<std::string, FieldValue>> row_fields(const ReportRow& r) {
  auto opt_i = [](const std::optional<int>& v) -> FieldValue {
    if (v) return FieldValue{static_cast<std::int64_t>(*v)};
    return FieldValue{};
  };
  auto opt_d = [](const std::optional<double>& v) -> FieldValue {
    if (v) return FieldValue{*v};
    return FieldValue{};
  };
  auto opt_b = [](const std::optional<bool>& v) -> FieldValue {
    if (v) return FieldValue{*v};
    return FieldValue{};
  };
  return {
      {"schema_version", static_cast<std::int64_t>(ExperimentReport::schema_version)},
      {"experiment", r.experiment},
      {"row", static_cast<std::int64_t>(r.row)},
      {"seed", r.seed},
      {"n", static_cast<std::int64_t>(r.n)},
      {"graph", r.graph},
      {"n_c", opt_i(r.n_c)},
      {"level", opt_i(r.level)},
      {"qaoa_energy", opt_d(r.qaoa_energy)},
      {"rqaoa_energy", opt_d(r.rqaoa_energy)},
      {"local_energy", opt_d(r.local_energy)},
      {"denominator", opt_d(r.denominator)},
      {"denominator_kind", r.denominator_kind},
      {"qaoa_ratio", opt_d(r.qaoa_ratio)},
      {"rqaoa_ratio", opt_d(r.rqaoa_ratio)},
      {"local_ratio", opt_d(r.local_ratio)},
      {"bound", opt_d(r.bound)},
      {"achieved", opt_d(r.achieved)},
      {"saturated", opt_b(r.saturated)},
      {"note", r.note},
      {"wallclock_ms", r.wallclock_ms},
  };
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string csv_cell(const FieldValue& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return csv_escape(x); }
  };
  return std::visit(Visitor{}, v);
}

inline nlohmann::json json_cell(const FieldValue& v) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(std::int64_t x) const { return x; }
    nlohmann::json operator()(std::uint64_t x) const { return x; }
    nlohmann::json operator()(double x) const { return x; }
    nlohmann::json operator()(bool x) const { return x; }
    nlohmann::json operator()(const std::string& x) const { return x; }
  };
  return std::visit(Visitor{}, v);
}

// Run fn(0..count-1) on up to `jobs` threads. Rows are independent and
// deterministic, so the schedule cannot change results.
template <class Fn>
inline void parallel_for(int jobs, int count, const Fn& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (;;) {
          int i = next.fetch_add(1);
          if (i >= count) return;
          fn(i);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

class RowTimer {
 public:
  RowTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline void write_csv(const ExperimentReport& report, std::ostream& out) {
  bool first = true;
  std::string header;
  for (const auto& row : report.rows) {
    auto fields = detail::row_fields(row);
    if (first) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) header += ",";
        header += fields[i].first;
      }
      out << header << "\n";
      first = false;
    }
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) line += ",";
      line += detail::csv_cell(fields[i].second);
    }
    out << line << "\n";
  }
  if (first) {
    // Empty report: still emit the header from a default row.
    auto fields = detail::row_fields(ReportRow{});
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ",";
      out << fields[i].first;
    }
    out << "\n";
  }
}

inline void write_json(const ExperimentReport& report, std::ostream& out) {
  nlohmann::json j;
  j["schema_version"] = ExperimentReport::schema_version;
  j["experiment"] = report.experiment_id;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json jr;
    for (const auto& [name, value] : detail::row_fields(row)) jr[name] = detail::json_cell(value);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << "\n";
}

inline std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  write_csv(report, out);
  return out.str();
}

inline std::string report_to_json_string(const ExperimentReport& report) {
  std::ostringstream out;
  write_json(report, out);
  return out.str();
}

inline bool report_has_violations(const ExperimentReport& report) {
  for (const auto& row : report.rows)
    if (row.note.rfind("VIOLATION:", 0) == 0) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Random 3-regular benchmark: level-p variational energy vs the recursive
// algorithm, one row per instance, ratios against an exact (n <= exact_cap)
// or best-found denominator. best_found is the best assignment energy seen
// (local search restarts and the recursive algorithm's own output), so
// ratios stay <= 1 by construction.

struct Fig1Config {
  int n = 20;
  int n_c = 8;
  int instances = 16;
  std::uint64_t seed = 1;
  int level = 1;
  int grid = 64;
  int refine_iters = 200;
  int sv_grid = 16;
  int exact_cap = 26;
  int restarts = 100;
  int jobs = 1;
  std::string trace_dir;   // when non-empty, one JSONL trace file per row
};

inline ExperimentReport run_fig1(const Fig1Config& cfg) {
  if (cfg.instances < 1) throw std::invalid_argument("run_fig1: instances must be >= 1");
  ExperimentReport report;
  report.experiment_id = "fig1";
  report.rows.resize(cfg.instances);
  if (!cfg.trace_dir.empty()) std::filesystem::create_directories(cfg.trace_dir);

  SplitMix64 root(cfg.seed);
  detail::parallel_for(cfg.jobs, cfg.instances, [&](int i) {
    detail::RowTimer timer;
    const std::uint64_t child_seed = root.split_seed(static_cast<std::uint64_t>(i));
    ReportRow row;
    row.experiment = "fig1";
    row.row = i;
    row.seed = child_seed;
    row.n = cfg.n;
    row.n_c = cfg.n_c;
    row.level = cfg.level;
    row.graph = "rr3:n=" + std::to_string(cfg.n) + ",seed=" + std::to_string(child_seed);

    const IsingInstance inst = random_regular_instance(cfg.n, 3, child_seed);

    VariationalOptimum opt;
    if (cfg.level == 1) {
      opt = optimize_level1(inst, cfg.grid, cfg.refine_iters);
    } else {
      opt = optimize_levelp_sv(inst, cfg.level, cfg.sv_grid, cfg.refine_iters);
    }
    row.qaoa_energy = opt.energy;

    RqaoaConfig rq_cfg;
    rq_cfg.level = cfg.level;
    rq_cfg.grid = cfg.grid;
    rq_cfg.refine_iters = cfg.refine_iters;
    rq_cfg.sv_grid = cfg.sv_grid;
    rq_cfg.core_cap = cfg.exact_cap;
    RqaoaResult rq = rqaoa(inst, cfg.n_c, rq_cfg);
    row.rqaoa_energy = rq.energy;

    double denom;
    if (cfg.n <= cfg.exact_cap) {
      denom = brute_force_max(inst, cfg.exact_cap).max_energy;
      row.denominator_kind = "exact";
    } else {
      LocalSearchResult ls = local_search_max(inst, cfg.restarts, child_seed);
      row.local_energy = ls.best_energy;
      denom = std::max(ls.best_energy, rq.energy);
      row.denominator_kind = "best_found";
    }
    row.denominator = denom;
    if (denom > 0.0) {
      row.qaoa_ratio = opt.energy / denom;
      row.rqaoa_ratio = rq.energy / denom;
      if (row.local_energy) row.local_ratio = *row.local_energy / denom;
    } else {
      row.note = "denominator <= 0, ratios omitted";
    }
    if (rq.degenerate_roundings > 0) {
      if (!row.note.empty()) row.note += "; ";
      row.note += std::to_string(rq.degenerate_roundings) + " degenerate rounding(s)";
    }

    if (!cfg.trace_dir.empty()) {
      std::ofstream trace(std::filesystem::path(cfg.trace_dir) /
                          ("fig1_row" + std::to_string(i) + ".trace.jsonl"));
      trace << trace_to_jsonl(rq.map.records);
    }
    row.wallclock_ms = timer.elapsed_ms();
    report.rows[i] = std::move(row);
  });
  return report;
}

// ---------------------------------------------------------------------------
// Ring suite: for each (n, R) pair, the block-state saturation value against
// its ceiling, plus a level-p sweep row per distinct n (when n is within the
// statevector budget). Invalid pairs produce clean error rows.

struct RingSuiteConfig {
  std::vector<std::pair<int, int>> pairs;   // (n, block radius R)
  int p = 1;
  int grid = 64;
  int sweep_cap = 14;
};

inline ExperimentReport run_ring_suite(const RingSuiteConfig& cfg) {
  ExperimentReport report;
  report.experiment_id = "ring";
  int row_id = 0;
  std::set<int> swept;
  for (const auto& [n, radius] : cfg.pairs) {
    {
      detail::RowTimer timer;
      ReportRow row;
      row.experiment = "ring";
      row.row = row_id++;
      row.n = n;
      row.graph = "ring:n=" + std::to_string(n);
      row.note = "block radius R=" + std::to_string(radius);
      try {
        const Statevector state = ghz_block_state(n, radius);
        const IsingInstance mc = max_cut_form(ring_instance(n));
        const double achieved = expectation_energy(state, mc) / n;
        const double bound = block_state_bound(radius);
        row.bound = bound;
        row.achieved = achieved;
        row.saturated = std::abs(achieved - bound) <= 1e-9;
        if (achieved > bound + 1e-9)
          row.note = "VIOLATION: block state exceeds its ceiling; " + row.note;
      } catch (const std::exception& e) {
        row.note = "rejected: " + std::string(e.what());
      }
      row.wallclock_ms = timer.elapsed_ms();
      report.rows.push_back(std::move(row));
    }
    if (n % 2 == 0 && n >= 4 && n <= cfg.sweep_cap && swept.insert(n).second) {
      detail::RowTimer timer;
      ReportRow row;
      row.experiment = "ring";
      row.row = row_id++;
      row.n = n;
      row.graph = "ring:n=" + std::to_string(n);
      row.level = cfg.p;
      row.note = "level-" + std::to_string(cfg.p) + " sweep";
      const double bound = (2.0 * cfg.p + 1.0) / (2.0 * cfg.p + 2.0);
      const double achieved = ring_bound_sweep(n, cfg.p, cfg.grid);
      row.bound = bound;
      row.achieved = achieved;
      row.saturated = std::abs(achieved - bound) <= 1e-3;
      if (achieved > bound + 1e-9)
        row.note = "VIOLATION: sweep exceeds the level bound; " + row.note;
      row.wallclock_ms = timer.elapsed_ms();
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sign-pattern ring family: for each pattern, the 1-local rule, the
// recursive algorithm and the level-1 energy, as ratios against the exact
// optimum. The 1-local and recursive ratios are asserted to be 1 and the
// level-1 ratio to stay within 0.502; anything else is marked VIOLATION.

struct AppdConfig {
  int n = 12;
  bool all = true;          // enumerate every sign pattern (needs n/3 <= 20)
  int samples = 16;         // when all == false: distinct random patterns
  std::uint64_t seed = 1;
  int n_c = 4;
  int level = 1;
  int grid = 64;
  int refine_iters = 200;
  int sv_grid = 16;
  int exact_cap = 26;
  int sweep_cap = 14;
  int jobs = 1;
};

inline ExperimentReport run_sign_pattern_family(const AppdConfig& cfg) {
  if (cfg.n < 3 || cfg.n % 3 != 0)
    throw std::invalid_argument("run_sign_pattern_family: n must be a positive multiple of 3");
  const int k = cfg.n / 3;
  std::vector<std::uint64_t> patterns;
  if (cfg.all) {
    if (k > 20)
      throw std::invalid_argument("run_sign_pattern_family: enumerating all patterns needs n/3 <= 20");
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) patterns.push_back(s);
  } else {
    const std::uint64_t space = (k >= 63) ? ~std::uint64_t{0} : (std::uint64_t{1} << k);
    if (k <= 20 && static_cast<std::uint64_t>(cfg.samples) >= space) {
      for (std::uint64_t s = 0; s < space; ++s) patterns.push_back(s);
    } else {
      SplitMix64 rng(cfg.seed);
      std::set<std::uint64_t> seen;
      while (static_cast<int>(seen.size()) < cfg.samples) seen.insert(rng.next_below(space));
      patterns.assign(seen.begin(), seen.end());
    }
  }

  ExperimentReport report;
  report.experiment_id = "appd";
  report.rows.resize(patterns.size());
  detail::parallel_for(cfg.jobs, static_cast<int>(patterns.size()), [&](int i) {
    detail::RowTimer timer;
    const std::uint64_t s = patterns[i];
    ReportRow row;
    row.experiment = "appd";
    row.row = i;
    row.seed = s;   // the pattern fully determines the instance
    row.n = cfg.n;
    row.n_c = cfg.n_c;
    row.level = cfg.level;
    row.graph = "appd:n=" + std::to_string(cfg.n) + ",s=" + std::to_string(s);

    const IsingInstance inst = sign_pattern_ring(cfg.n, s);

    const SpinAssignment local = one_local_ring_assignment(inst);
    const double local_energy = evaluate(inst, local);
    row.local_energy = local_energy;

    RqaoaConfig rq_cfg;
    rq_cfg.level = cfg.level;
    rq_cfg.grid = cfg.grid;
    rq_cfg.refine_iters = cfg.refine_iters;
    rq_cfg.sv_grid = cfg.sv_grid;
    rq_cfg.core_cap = cfg.exact_cap;
    const RqaoaResult rq = rqaoa(inst, cfg.n_c, rq_cfg);
    row.rqaoa_energy = rq.energy;

    double qaoa_energy;
    if (cfg.level == 1 && cfg.n <= cfg.sweep_cap) {
      qaoa_energy = sweep_level1_energy(inst, cfg.grid).max_energy;
      row.note = "qaoa=sweep";
    } else if (cfg.level == 1) {
      qaoa_energy = optimize_level1(inst, cfg.grid, cfg.refine_iters).energy;
      row.note = "qaoa=closed-form";
    } else {
      qaoa_energy = optimize_levelp_sv(inst, cfg.level, cfg.sv_grid, cfg.refine_iters).energy;
      row.note = "qaoa=statevector";
    }
    row.qaoa_energy = qaoa_energy;

    double denom;
    if (cfg.n <= cfg.exact_cap) {
      denom = brute_force_max(inst, cfg.exact_cap).max_energy;
      row.denominator_kind = "exact";
    } else {
      // The 1-local assignment is provably optimal here, so best_found
      // includes it and the denominator still equals the true optimum.
      denom = std::max({local_energy, rq.energy});
      row.denominator_kind = "best_found";
    }
    row.denominator = denom;
    row.local_ratio = local_energy / denom;
    row.rqaoa_ratio = rq.energy / denom;
    row.qaoa_ratio = qaoa_energy / denom;

    std::string violation;
    if (local_energy != denom) violation += " 1-local below optimum;";
    if (rq.energy != denom) violation += " recursion below optimum;";
    if (*row.qaoa_ratio > 0.502) violation += " level-1 ratio above 0.502;";
    if (!violation.empty()) row.note = "VIOLATION:" + violation + " " + row.note;

    row.wallclock_ms = timer.elapsed_ms();
    report.rows[i] = std::move(row);
  });
  return report;
}

}  // namespace rqaoa
