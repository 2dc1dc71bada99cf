// netmon: randomized sensor placement from the command line.
//
//   netmon solve    --instance f.json --r 2 [--method approx|gcs|ub|exact|cg|mwu|homogeneous|disjoint]
//   netmon sweep    --instance f.json [--r-from 1] [--r-to n*] [--methods gcs,ub,cg] [--format csv|json]
//   netmon generate --kind random|disjoint|homogeneous|grid --seed 7 [params]
//   netmon schedule --instance f.json --strategy s.json --days 30 [--mode iid|cycle]
//
// Exit codes: 0 ok, 2 bad input, 3 enumeration guard hit, 4 time limit
// (partial output written), 1 anything else.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netmon/bounds.hpp"
#include "netmon/column_generation.hpp"
#include "netmon/generate.hpp"
#include "netmon/io.hpp"
#include "netmon/mwu.hpp"
#include "netmon/oracle.hpp"
#include "netmon/report.hpp"

namespace {

using namespace netmon;

constexpr int kExitInput = 2, kExitCapacity = 3, kExitTimeLimit = 4;

struct SolveArgs {
  std::string instance, method = "approx", out, gcs_method = "threshold", ub_method = "by_size",
                        mode = "exact";
  int r = 0;
  std::optional<int> max_support;
  double tol = 1e-7, time_limit = 600, epsilon = 0.1;
  std::uint64_t seed = 0;
};

struct SweepArgs {
  std::string instance, methods = "gcs,ub,cg", format = "csv", out, gcs_method = "threshold",
                        ub_method = "by_size", mode = "exact";
  int r_from = 1, r_to = 0;
  std::optional<int> max_support;
  double tol = 1e-7, time_limit = 600, epsilon = 0.1;
  bool no_times = false;
};

struct GenerateArgs {
  std::string kind = "random", out;
  std::uint64_t seed = 0;
  GenerateParams params;
};

struct ScheduleArgs {
  std::string instance, strategy, mode = "iid", out;
  int days = 1;
  std::uint64_t seed = 0;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

ordered_json ids(const Instance& inst, const std::vector<LocationIndex>& locs) {
  auto out = ordered_json::array();
  for (auto x : locs) out.push_back(inst.location_id(x));
  return out;
}

ordered_json component_ids(const Instance& inst, const std::vector<ComponentIndex>& comps) {
  auto out = ordered_json::array();
  for (auto u : comps) out.push_back(inst.component_id(u));
  return out;
}

int run_solve(const SolveArgs& a) {
  const auto inst = load_instance(a.instance);
  const int r = a.r > 0 ? a.r : inst.budget();
  ordered_json doc;
  doc["method"] = a.method;
  doc["r"] = r;
  int code = 0;
  auto put_strategy = [&](const MixedStrategy& s) {
    doc["achieved"] = evaluate_strategy(inst, s).value;
    doc["node_basis"] = ids(inst, node_basis(s));
    doc["strategy"] = strategy_to_json(inst, s);
  };
  auto put_approx = [&](const ApproxSolution& s) {
    doc["value"] = s.lower;
    doc["lower"] = s.lower;
    doc["upper"] = s.upper;
    doc["gap"] = s.gap;
    doc["relative_gap"] = s.relative_gap;
    doc["chosen"] = ids(inst, s.chosen);
    doc["packing"] = component_ids(inst, s.packing);
    put_strategy(s.strategy);
  };
  const auto gm = parse_gcs_method(a.gcs_method);
  const auto um = parse_upper_bound_method(a.ub_method);
  if (a.method == "approx") {
    put_approx(solve_approx(inst, r, a.max_support, gm, um));
  } else if (a.method == "gcs") {
    const auto g = solve_gcs(inst, r, a.max_support, gm);
    doc["value"] = g.value;
    doc["chosen"] = ids(inst, g.chosen);
    doc["marginals"] = g.marginals.values;
    put_strategy(decompose(g.marginals, r));
  } else if (a.method == "ub") {
    const auto u = upper_bound(inst, r, um);
    doc["value"] = u.value;
    doc["packing"] = component_ids(inst, u.packing);
    doc["max_packing"] = u.max_packing;
  } else if (a.method == "exact") {
    const auto e = solve_exact(inst, r);
    doc["value"] = e.value;
    doc["attacker"] = e.attacker.weights;
    put_strategy(e.strategy);
  } else if (a.method == "cg") {
    CgOptions o;
    o.tolerance = a.tol;
    o.time_limit = std::chrono::duration<double>(a.time_limit);
    const auto c = solve_cg(inst, r, o);
    doc["value"] = c.value;
    doc["termination"] = to_string(c.termination);
    doc["iterations"] = c.iterations;
    doc["columns_generated"] = c.columns_generated;
    put_strategy(c.strategy);
    if (c.termination != CgTermination::priced_out) code = kExitTimeLimit;
  } else if (a.method == "mwu") {
    const auto m = solve_mwu_for_gap(inst, r, a.epsilon, parse_response_mode(a.mode));
    doc["value"] = m.achieved;
    doc["eta"] = m.eta;
    doc["iterations"] = m.iterations;
    doc["mode"] = to_string(m.mode);
    doc["slack"] = m.slack();
    put_strategy(m.strategy);
  } else if (a.method == "homogeneous") {
    put_approx(homogeneous_solution(inst, r));
  } else if (a.method == "disjoint") {
    put_approx(disjoint_solution(inst, r));
  } else {
    throw InputError("unknown method '" + a.method + "'");
  }
  emit(a.out, doc.dump(2) + "\n");
  return code;
}

int run_sweep_cmd(const SweepArgs& a) {
  const auto inst = load_instance(a.instance);
  const int to = a.r_to > 0 ? a.r_to : min_set_cover(inst).size;
  if (a.r_from < 1 || to < a.r_from) throw InputError("empty or invalid budget range");
  std::vector<int> budgets;
  for (int r = a.r_from; r <= to; ++r) budgets.push_back(r);
  SweepOptions o;
  o.methods = parse_methods(a.methods);
  o.max_support = a.max_support;
  o.gcs_method = parse_gcs_method(a.gcs_method);
  o.ub_method = parse_upper_bound_method(a.ub_method);
  o.tolerance = a.tol;
  o.time_limit = std::chrono::duration<double>(a.time_limit);
  o.mwu_epsilon = a.epsilon;
  o.mwu_mode = parse_response_mode(a.mode);
  const auto rep = run_sweep(inst, budgets, o);
  if (a.format == "csv") {
    emit(a.out, format_csv(rep, !a.no_times));
  } else if (a.format == "json") {
    emit(a.out, format_json(rep, !a.no_times));
  } else {
    throw InputError("unknown format '" + a.format + "'");
  }
  for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
  return rep.timed_out ? kExitTimeLimit : 0;
}

int run_generate(const GenerateArgs& a) {
  const auto inst = generate(parse_instance_kind(a.kind), a.params, a.seed);
  emit(a.out, format_instance(inst));
  return 0;
}

int run_schedule(const ScheduleArgs& a) {
  const auto inst = load_instance(a.instance);
  const auto s = strategy_from_json(inst, io_detail::parse_strict(read_file(a.strategy)));
  const auto days = sample_schedule(s, a.days, a.seed, parse_schedule_mode(a.mode));
  std::string out = "day,placement\n";
  for (std::size_t d = 0; d < days.size(); ++d) {
    out += std::to_string(d + 1) + ",";
    bool first = true;
    for (auto x : days[d].locations()) {
      out += (first ? "" : " ") + inst.location_id(x);
      first = false;
    }
    out += "\n";
  }
  emit(a.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized multi-sensor monitoring strategies"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve for one budget and print a JSON report");
  s->add_option("--instance", solve.instance, "Instance file (JSON)")->required();
  s->add_option("--r", solve.r, "Number of sensors (default: the file's budget)");
  s->add_option("--method", solve.method,
                "approx, gcs, ub, exact, cg, mwu, homogeneous or disjoint");
  s->add_option("--max-support", solve.max_support, "Cap on the number of monitored locations");
  s->add_option("--tol", solve.tol, "Reduced-cost tolerance for column generation");
  s->add_option("--time-limit", solve.time_limit, "Seconds allowed for column generation");
  s->add_option("--epsilon", solve.epsilon, "Target gap for multiplicative weights");
  s->add_option("--mode", solve.mode, "Best responses for multiplicative weights: exact or greedy");
  s->add_option("--gcs-method", solve.gcs_method, "threshold or milp");
  s->add_option("--ub-method", solve.ub_method, "by_size or milp");
  s->add_option("--seed", solve.seed, "Accepted for symmetry; every solver is deterministic");
  s->add_option("--out", solve.out, "Write here instead of stdout");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run several methods over a range of budgets");
  w->add_option("--instance", sweep.instance, "Instance file (JSON)")->required();
  w->add_option("--r-from", sweep.r_from, "First budget");
  w->add_option("--r-to", sweep.r_to, "Last budget (default: minimum cover size)");
  w->add_option("--methods", sweep.methods, "Comma list from gcs, ub, exact, cg, mwu");
  w->add_option("--format", sweep.format, "csv or json");
  w->add_option("--max-support", sweep.max_support, "Cap on the number of monitored locations");
  w->add_option("--tol", sweep.tol, "Reduced-cost tolerance for column generation");
  w->add_option("--time-limit", sweep.time_limit, "Seconds per column generation cell");
  w->add_option("--epsilon", sweep.epsilon, "Target gap for multiplicative weights");
  w->add_option("--mode", sweep.mode, "exact or greedy best responses");
  w->add_option("--gcs-method", sweep.gcs_method, "threshold or milp");
  w->add_option("--ub-method", sweep.ub_method, "by_size or milp");
  w->add_flag("--no-times", sweep.no_times, "Leave timing columns empty");
  w->add_option("--out", sweep.out, "Write here instead of stdout");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic instance");
  g->add_option("--kind", gen.kind, "random, disjoint, homogeneous or grid");
  g->add_option("--seed", gen.seed, "Generator seed (mt19937_64)");
  g->add_option("--locations", gen.params.locations);
  g->add_option("--components", gen.params.components);
  g->add_option("--density", gen.params.density, "Membership probability");
  g->add_option("--per-location", gen.params.per_location, "Components per location (disjoint)");
  g->add_option("--level", gen.params.level, "Shared security level (homogeneous)");
  g->add_option("--rows", gen.params.rows);
  g->add_option("--cols", gen.params.cols);
  g->add_option("--keep", gen.params.keep, "Probability a grid edge is kept");
  g->add_option("--budget", gen.params.budget);
  g->add_option("--out", gen.out, "Write here instead of stdout");

  ScheduleArgs sched;
  auto* c = app.add_subcommand("schedule", "Sample daily placements from a strategy");
  c->add_option("--instance", sched.instance, "Instance file (JSON)")->required();
  c->add_option("--strategy", sched.strategy, "Output of solve, or a bare atom list")->required();
  c->add_option("--days", sched.days, "Number of days");
  c->add_option("--seed", sched.seed, "Sampling seed (mt19937_64)");
  c->add_option("--mode", sched.mode, "iid or cycle");
  c->add_option("--out", sched.out, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*s) return run_solve(solve);
    if (*w) return run_sweep_cmd(sweep);
    if (*g) return run_generate(gen);
    if (*c) return run_schedule(sched);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTimeLimit;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
