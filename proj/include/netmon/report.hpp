#pragma once

// Method sweeps over a range of budgets, emitted as CSV or JSON, and
// day-by-day schedules sampled from a mixed strategy.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "netmon/bounds.hpp"
#include "netmon/column_generation.hpp"
#include "netmon/decomposition.hpp"
#include "netmon/errors.hpp"
#include "netmon/generate.hpp"
#include "netmon/instance.hpp"
#include "netmon/mwu.hpp"
#include "netmon/oracle.hpp"

namespace netmon {

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "r",          "lb_gcs",         "achieved",      "ub_packing",     "value_exact",
      "value_cg",   "value_mwu",      "time_gcs_ca",   "time_ub",        "time_cg",
      "time_mwu",   "node_basis_gcs", "node_basis_cg", "node_basis_mwu", "support_gcs"};
  return cols;
}

inline const std::set<std::string>& known_methods() {
  static const std::set<std::string> m = {"gcs", "ub", "exact", "cg", "mwu"};
  return m;
}

inline std::set<std::string> parse_methods(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!known_methods().count(item)) throw InputError("unknown method '" + item + "'");
    out.insert(item);
  }
  if (out.empty()) throw InputError("no methods requested");
  return out;
}

struct SweepOptions {
  std::set<std::string> methods = {"gcs", "ub", "cg"};
  std::optional<int> max_support;
  GcsMethod gcs_method = GcsMethod::threshold;
  UpperBoundMethod ub_method = UpperBoundMethod::by_size;
  double tolerance = 1e-7;
  /// Per cell, for column generation.
  std::chrono::duration<double> time_limit = std::chrono::seconds(600);
  double mwu_epsilon = 0.1;
  ResponseMode mwu_mode = ResponseMode::exact;
};

struct SweepRow {
  int r = 0;
  std::optional<double> lb_gcs, achieved, ub_packing, value_exact, value_cg, value_mwu;
  std::optional<double> time_gcs_ca, time_ub, time_cg, time_mwu;
  std::optional<std::size_t> node_basis_gcs, node_basis_cg, node_basis_mwu, support_gcs;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  /// One line per cell that was requested but left empty.
  std::vector<std::string> notes;
  bool timed_out = false;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace report_detail {

template <class T>
std::string cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

template <class T>
nlohmann::ordered_json json_cell(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::string dump(const SweepRow& row) {
  return "r=" + std::to_string(row.r) + " lb_gcs=" + cell(row.lb_gcs) +
         " achieved=" + cell(row.achieved) + " ub_packing=" + cell(row.ub_packing) +
         " value_exact=" + cell(row.value_exact) + " value_cg=" + cell(row.value_cg) +
         " value_mwu=" + cell(row.value_mwu);
}

inline double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace report_detail

/// Runs every requested method at each budget. Failed cells stay empty and
/// are noted; the sweep carries on. A row whose lower bound exceeds its upper
/// bound aborts with InvariantError.
inline SweepReport run_sweep(const Instance& inst, const std::vector<int>& budgets,
                             const SweepOptions& opt = {}) {
  require_valid(inst);
  for (const auto& m : opt.methods) {
    if (!known_methods().count(m)) throw InputError("unknown method '" + m + "'");
  }
  auto has = [&](const char* m) { return opt.methods.count(m) > 0; };
  SweepReport rep;
  for (int r : budgets) {
    if (r < 1 || static_cast<std::size_t>(r) > inst.num_locations()) {
      throw InputError("budget r = " + std::to_string(r) + " out of range");
    }
    SweepRow row;
    row.r = r;
    auto note = [&](const char* method, const std::string& what) {
      rep.notes.push_back(std::string(method) + " r=" + std::to_string(r) + ": " + what);
    };
    auto guarded = [&](const char* method, auto&& body) {
      try {
        body();
      } catch (const CapacityError& e) {
        note(method, std::string("capacity: ") + e.what());
      } catch (const SolverError& e) {
        rep.timed_out = true;
        note(method, std::string("solver stopped: ") + e.what());
      }
    };
    if (has("gcs")) {
      guarded("gcs", [&] {
        const auto start = Clock::now();
        const auto g = solve_gcs(inst, r, opt.max_support, opt.gcs_method);
        const auto s = decompose(g.marginals, r);
        row.time_gcs_ca = report_detail::elapsed(start);
        row.lb_gcs = g.value;
        row.achieved = evaluate_strategy(inst, s).value;
        row.node_basis_gcs = node_basis(s).size();
        row.support_gcs = s.support_size();
      });
    }
    if (has("ub")) {
      guarded("ub", [&] {
        const auto start = Clock::now();
        const auto u = upper_bound(inst, r, opt.ub_method);
        row.time_ub = report_detail::elapsed(start);
        row.ub_packing = u.value;
      });
    }
    if (has("exact")) {
      guarded("exact", [&] { row.value_exact = solve_exact(inst, r).value; });
    }
    if (has("cg")) {
      guarded("cg", [&] {
        CgOptions cg;
        cg.tolerance = opt.tolerance;
        cg.time_limit = opt.time_limit;
        const auto start = Clock::now();
        const auto res = solve_cg(inst, r, cg);
        const double t = report_detail::elapsed(start);
        if (res.termination != CgTermination::priced_out) {
          rep.timed_out = true;
          note("cg", std::string(to_string(res.termination)) + " after " +
                         std::to_string(res.iterations) + " iterations, master value " +
                         format_number(res.value));
          return;
        }
        row.time_cg = t;
        row.value_cg = res.value;
        row.node_basis_cg = node_basis(res.strategy).size();
      });
    }
    if (has("mwu")) {
      guarded("mwu", [&] {
        if (inst.num_components() < 2) {
          note("mwu", "needs at least two components");
          return;
        }
        const auto start = Clock::now();
        const auto res = solve_mwu_for_gap(inst, r, opt.mwu_epsilon, opt.mwu_mode);
        row.time_mwu = report_detail::elapsed(start);
        row.value_mwu = res.achieved;
        row.node_basis_mwu = node_basis(res.strategy).size();
      });
    }
    if (row.lb_gcs && row.ub_packing && *row.lb_gcs > *row.ub_packing + 1e-7) {
      throw InvariantError("lower bound exceeds upper bound: " + report_detail::dump(row));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

inline std::vector<std::string> row_cells(const SweepRow& row, bool with_times = true) {
  using report_detail::cell;
  auto t = [&](const std::optional<double>& v) { return with_times ? cell(v) : std::string(); };
  return {std::to_string(row.r),  cell(row.lb_gcs),         cell(row.achieved),
          cell(row.ub_packing),   cell(row.value_exact),    cell(row.value_cg),
          cell(row.value_mwu),    t(row.time_gcs_ca),       t(row.time_ub),
          t(row.time_cg),         t(row.time_mwu),          cell(row.node_basis_gcs),
          cell(row.node_basis_cg), cell(row.node_basis_mwu), cell(row.support_gcs)};
}

/// Header plus one line per row. Without timings the output is byte-for-byte
/// reproducible.
inline std::string format_csv(const SweepReport& rep, bool with_times = true) {
  std::string out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& row : rep.rows) {
    const auto cells = row_cells(row, with_times);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  }
  return out;
}

inline std::string format_json(const SweepReport& rep, bool with_times = true) {
  using report_detail::json_cell;
  auto rows = nlohmann::ordered_json::array();
  auto t = [&](const std::optional<double>& v) {
    return with_times ? json_cell(v) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& row : rep.rows) {
    rows.push_back({{"r", row.r},
                    {"lb_gcs", json_cell(row.lb_gcs)},
                    {"achieved", json_cell(row.achieved)},
                    {"ub_packing", json_cell(row.ub_packing)},
                    {"value_exact", json_cell(row.value_exact)},
                    {"value_cg", json_cell(row.value_cg)},
                    {"value_mwu", json_cell(row.value_mwu)},
                    {"time_gcs_ca", t(row.time_gcs_ca)},
                    {"time_ub", t(row.time_ub)},
                    {"time_cg", t(row.time_cg)},
                    {"time_mwu", t(row.time_mwu)},
                    {"node_basis_gcs", json_cell(row.node_basis_gcs)},
                    {"node_basis_cg", json_cell(row.node_basis_cg)},
                    {"node_basis_mwu", json_cell(row.node_basis_mwu)},
                    {"support_gcs", json_cell(row.support_gcs)}});
  }
  nlohmann::ordered_json doc = {{"rows", rows}, {"notes", rep.notes}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Schedules

enum class ScheduleMode { iid, cycle };

inline ScheduleMode parse_schedule_mode(const std::string& s) {
  if (s == "iid") return ScheduleMode::iid;
  if (s == "cycle") return ScheduleMode::cycle;
  throw InputError("unknown schedule mode '" + s + "'");
}

/// One placement per day. iid draws each day independently; cycle walks the
/// atoms in order and needs equal probabilities and equal atom sizes.
inline std::vector<Placement> sample_schedule(const MixedStrategy& s, int days, std::uint64_t seed,
                                              ScheduleMode mode) {
  if (days < 1) throw InputError("days must be >= 1");
  const auto& atoms = s.atoms();
  if (atoms.empty()) throw InputError("strategy has no atoms");
  std::vector<Placement> out;
  out.reserve(static_cast<std::size_t>(days));
  if (mode == ScheduleMode::cycle) {
    const double p = 1.0 / static_cast<double>(atoms.size());
    for (const auto& a : atoms) {
      if (std::abs(a.probability - p) > 1e-9 || a.placement.size() != atoms.front().placement.size()) {
        throw PreconditionError("cycle schedules need a uniform strategy over equal-size placements");
      }
    }
    for (int d = 0; d < days; ++d) out.push_back(atoms[static_cast<std::size_t>(d) % atoms.size()].placement);
    return out;
  }
  Rng rng(seed);
  for (int d = 0; d < days; ++d) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = atoms.size() - 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      acc += atoms[i].probability;
      if (u < acc) {
        pick = i;
        break;
      }
    }
    out.push_back(atoms[pick].placement);
  }
  return out;
}

}  // namespace netmon
