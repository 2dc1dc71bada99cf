#pragma once

// Column generation: restricted master LP over a growing set of placements,
// priced by maximum weighted coverage.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "netmon/coverage.hpp"
#include "netmon/dense_lp.hpp"
#include "netmon/errors.hpp"
#include "netmon/formulations.hpp"
#include "netmon/instance.hpp"
#include "netmon/milp.hpp"

namespace netmon {

struct PricingResult {
  double reduced_cost = 0.0;
  Placement placement;
};

/// max_X  -beta + sum_u alpha_u f(X, u)  over placements of size r.
inline PricingResult price(const Instance& inst, int r, const std::vector<double>& alpha,
                           double beta, const MilpOptions& options = {}) {
  auto s = best_coverage(inst, r, alpha, -beta, options);
  return {s.value, std::move(s.placement)};
}

enum class CgTermination { priced_out, time_limit, iteration_limit };

inline const char* to_string(CgTermination t) {
  switch (t) {
    case CgTermination::priced_out: return "priced_out";
    case CgTermination::time_limit: return "time_limit";
    case CgTermination::iteration_limit: return "iteration_limit";
  }
  return "?";
}

struct CgOptions {
  double tolerance = 1e-7;
  std::chrono::duration<double> time_limit = std::chrono::seconds(600);
  std::size_t iteration_limit = 10'000;
};

struct CgResult {
  MixedStrategy strategy;
  double value = 0.0;
  /// Pricing rounds performed.
  std::size_t iterations = 0;
  std::size_t initial_columns = 0;
  std::size_t columns_generated = 0;
  std::vector<double> reduced_costs;
  /// Master value after each solve, starting with the initial columns.
  std::vector<double> values;
  CgTermination termination = CgTermination::priced_out;
};

/// Greedy uniform-weight placement, then for each of the r most critical
/// components a placement built greedily around a location covering it.
inline std::vector<Placement> initial_columns(const Instance& inst, int r) {
  const std::vector<double> uniform(inst.num_components(), 1.0);
  std::vector<Placement> cols{greedy_placement(inst, r, uniform)};
  std::vector<ComponentIndex> order(inst.num_components());
  for (ComponentIndex u = 0; u < order.size(); ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(), [&](ComponentIndex a, ComponentIndex b) {
    return inst.security_level(a) < inst.security_level(b);
  });
  const std::size_t take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < take; ++i) {
    const ComponentIndex u = order[i];
    LocationIndex anchor = inst.num_locations();
    double best = -1.0;
    for (LocationIndex x : inst.covering_locations(u)) {
      double gain = 0.0;
      for (ComponentIndex v : inst.monitoring_set(x)) gain += 1.0 - inst.security_level(v);
      if (gain > best) best = gain, anchor = x;
    }
    auto col = greedy_placement(inst, r, uniform, {anchor});
    if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(std::move(col));
  }
  return cols;
}

namespace detail {

inline MixedStrategy master_strategy(const MasterLp& m, const LpSolution& s) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < m.columns.size(); ++i) {
    if (s.x[i] > 1e-12) {
      atoms.push_back({m.columns[i], s.x[i]});
      total += s.x[i];
    }
  }
  for (auto& a : atoms) a.probability /= total;
  return MixedStrategy(std::move(atoms));
}

}  // namespace detail

inline CgResult solve_cg(const Instance& inst, int r, const CgOptions& options = {}) {
  require_valid(inst);
  if (!(options.tolerance >= 0.0)) throw InputError("tolerance must be >= 0");
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(options.time_limit);
  auto columns = initial_columns(inst, r);
  std::set<Placement> seen(columns.begin(), columns.end());
  CgResult out;
  out.initial_columns = columns.size();
  MilpOptions pricing;
  pricing.deadline = deadline;
  while (true) {
    const auto master = build_restricted_master(inst, columns);
    const auto sol = solve_lp(master.lp);
    if (sol.status != LpStatus::optimal) {
      throw InvariantError(std::string("restricted master not optimal: ") + to_string(sol.status));
    }
    out.value = sol.objective;
    out.values.push_back(out.value);
    out.strategy = detail::master_strategy(master, sol);
    if (out.iterations >= options.iteration_limit) {
      out.termination = CgTermination::iteration_limit;
      break;
    }
    if (Clock::now() >= deadline) {
      out.termination = CgTermination::time_limit;
      break;
    }
    std::vector<double> alpha(inst.num_components());
    for (ComponentIndex u = 0; u < alpha.size(); ++u) {
      alpha[u] = std::max(0.0, sol.duals[master.first_component_row + u]);
    }
    PricingResult priced;
    try {
      priced = price(inst, r, alpha, sol.duals[master.sum_row], pricing);
    } catch (const SolverError&) {
      out.termination = CgTermination::time_limit;
      break;
    }
    ++out.iterations;
    out.reduced_costs.push_back(priced.reduced_cost);
    if (priced.reduced_cost <= options.tolerance) {
      out.termination = CgTermination::priced_out;
      break;
    }
    if (!seen.insert(priced.placement).second) {
      throw InvariantError("pricing returned a column already in the master with reduced cost " +
                           std::to_string(priced.reduced_cost));
    }
    columns.push_back(std::move(priced.placement));
    ++out.columns_generated;
  }
  return out;
}

}  // namespace netmon
