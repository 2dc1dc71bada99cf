#pragma once

// Maximum weighted coverage with r sensors: greedy and exact.

#include <cstddef>
#include <vector>

#include "netmon/errors.hpp"
#include "netmon/formulations.hpp"
#include "netmon/instance.hpp"
#include "netmon/milp.hpp"

namespace netmon {

/// sum_u w_u f(X, u) + constant.
inline double coverage_value(const Instance& inst, const Placement& p,
                             const std::vector<double>& weights, double constant = 0.0) {
  const auto covered = covered_components(inst, p);
  double v = constant;
  for (ComponentIndex u = 0; u < weights.size(); ++u) {
    v += weights[u] * (covered[u] ? 1.0 : inst.security_level(u));
  }
  return v;
}

/// Repeatedly add the location with the largest gain sum w_u (1 - phi_u) over
/// still uncovered u in its set; ties go to the lowest index.
inline Placement greedy_placement(const Instance& inst, int r, const std::vector<double>& weights,
                                  std::vector<LocationIndex> start = {}) {
  if (weights.size() != inst.num_components()) throw InputError("weight vector size mismatch");
  if (r < 1 || static_cast<std::size_t>(r) > inst.num_locations()) {
    throw InputError("budget r out of range");
  }
  std::vector<char> used(inst.num_locations(), 0), covered(inst.num_components(), 0);
  for (LocationIndex x : start) {
    inst.check_location(x);
    used[x] = 1;
    for (ComponentIndex u : inst.monitoring_set(x)) covered[u] = 1;
  }
  std::vector<LocationIndex> chosen = start;
  while (chosen.size() < static_cast<std::size_t>(r)) {
    LocationIndex best = inst.num_locations();
    double best_gain = -1.0;
    for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
      if (used[x]) continue;
      double gain = 0.0;
      for (ComponentIndex u : inst.monitoring_set(x)) {
        if (!covered[u]) gain += weights[u] * (1.0 - inst.security_level(u));
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = x;
      }
    }
    used[best] = 1;
    chosen.push_back(best);
    for (ComponentIndex u : inst.monitoring_set(best)) covered[u] = 1;
  }
  return Placement(std::move(chosen));
}

struct CoverageSolution {
  Placement placement;
  double value = 0.0;
  std::size_t nodes = 0;
};

/// Exact maximum of constant + sum_u w_u f(X, u) over size-r placements. The
/// greedy placement seeds the search as incumbent.
inline CoverageSolution best_coverage(const Instance& inst, int r, const std::vector<double>& weights,
                                      double constant, const MilpOptions& base = {}) {
  auto [p, v] = build_mwc(inst, r, weights, constant);
  MilpOptions opt = base;
  const auto seed = greedy_placement(inst, r, weights);
  opt.initial_incumbent.assign(p.lp.num_variables(), 0.0);
  const auto covered = covered_components(inst, seed);
  for (ComponentIndex u = 0; u < v.y.size(); ++u) opt.initial_incumbent[v.y[u]] = covered[u];
  for (LocationIndex x : seed.locations()) opt.initial_incumbent[v.z[x]] = 1.0;
  opt.initial_incumbent.back() = 1.0;  // the constant carrier
  const auto s = solve_milp(p, opt);
  if (s.status != MilpStatus::optimal) {
    throw SolverError(std::string("weighted coverage stopped early: ") + to_string(s.status),
                      s.nodes);
  }
  CoverageSolution out;
  out.placement = mwc_placement(v, s.x);
  out.value = s.objective;
  out.nodes = s.nodes;
  return out;
}

}  // namespace netmon
