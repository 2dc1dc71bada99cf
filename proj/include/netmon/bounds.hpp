#pragma once

// Lower bound, strategy and upper bound for the monitoring game, plus the
// closed-form special cases (disjoint monitoring sets, identical levels).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netmon/decomposition.hpp"
#include "netmon/errors.hpp"
#include "netmon/formulations.hpp"
#include "netmon/instance.hpp"
#include "netmon/milp.hpp"

namespace netmon {

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  Clock::time_point start_;
};

namespace detail {

inline MilpSolution solve_or_throw(const MilpProblem& p, const char* what,
                                   const MilpOptions& options = {}) {
  auto s = solve_milp(p, options);
  if (s.status == MilpStatus::node_limit || s.status == MilpStatus::time_limit ||
      s.status == MilpStatus::unknown) {
    throw SolverError(std::string(what) + " stopped early: " + to_string(s.status), s.nodes);
  }
  return s;
}

}  // namespace detail

struct CoverResult {
  int size = 0;
  std::vector<LocationIndex> locations;
};

struct PackingResult {
  int size = 0;
  std::vector<ComponentIndex> components;
};

/// Smallest set of locations whose monitoring sets cover every component.
inline CoverResult min_set_cover(const Instance& inst) {
  require_valid(inst);
  MilpProblem p;
  p.lp.sense = Sense::minimize;
  for (std::size_t x = 0; x < inst.num_locations(); ++x) {
    p.binaries.push_back(p.lp.add_variable(1.0, 0.0, 1.0));
  }
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (LocationIndex x : inst.covering_locations(u)) terms.push_back({x, 1.0});
    p.lp.add_constraint(terms, Relation::greater_equal, 1.0);
  }
  const auto s = detail::solve_or_throw(p, "set cover");
  CoverResult out;
  for (std::size_t x = 0; x < inst.num_locations(); ++x) {
    if (s.x[x] > 0.5) out.locations.push_back(x);
  }
  out.size = static_cast<int>(out.locations.size());
  return out;
}

/// Largest set of components meeting every monitoring set at most once.
inline PackingResult max_set_packing(const Instance& inst) {
  require_valid(inst);
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  for (std::size_t u = 0; u < inst.num_components(); ++u) {
    p.binaries.push_back(p.lp.add_variable(1.0, 0.0, 1.0));
  }
  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (ComponentIndex u : inst.monitoring_set(x)) terms.push_back({u, 1.0});
    p.lp.add_constraint(terms, Relation::less_equal, 1.0);
  }
  const auto s = detail::solve_or_throw(p, "set packing");
  PackingResult out;
  for (std::size_t u = 0; u < inst.num_components(); ++u) {
    if (s.x[u] > 0.5) out.components.push_back(u);
  }
  out.size = static_cast<int>(out.components.size());
  return out;
}

struct GcsResult {
  double value = 0.0;
  std::vector<LocationIndex> chosen;  // the set C
  MarginalVector marginals;
  std::size_t nodes = 0;
};

/// How the covering-set optimum is computed. Both return the same value.
///   threshold  one weighted set-cover search per distinct security level
///   milp       the big-M covering-set model, solved whole
enum class GcsMethod { threshold, milp };

inline GcsMethod parse_gcs_method(const std::string& s) {
  if (s == "threshold") return GcsMethod::threshold;
  if (s == "milp") return GcsMethod::milp;
  throw InputError("unknown covering-set method '" + s + "'");
}

/// Level the r sensors can lift every location of C to: 1 when |C| <= r.
inline double spread_level(const Instance& inst, std::span<const LocationIndex> c, int r) {
  if (c.size() <= static_cast<std::size_t>(r)) return 1.0;
  return k_star(inst, c, r).value;
}

namespace detail {

inline void finish_gcs(const Instance& inst, int r, GcsResult& out) {
  // Fewer than r locations: pad with the lowest unused indices.
  for (LocationIndex x = 0; out.chosen.size() < static_cast<std::size_t>(r); ++x) {
    if (std::find(out.chosen.begin(), out.chosen.end(), x) == out.chosen.end()) {
      out.chosen.push_back(x);
    }
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  if (out.chosen.size() > static_cast<std::size_t>(r)) {
    out.marginals = optimal_marginals(inst, out.chosen, r);
  } else {
    out.marginals.values.assign(inst.num_locations(), 0.0);
    for (LocationIndex x : out.chosen) out.marginals.values[x] = 1.0;
  }
}

inline GcsResult solve_gcs_milp(const Instance& inst, int r, std::optional<int> max_support) {
  auto [p, v] = build_gcs(inst, r, max_support);
  const auto first = solve_or_throw(p, "covering-set model");
  if (first.status == MilpStatus::infeasible) {
    throw SolverError("covering-set model is infeasible", first.nodes);
  }
  GcsResult out;
  out.value = first.objective;
  out.nodes = first.nodes;

  // Re-solve with the value pinned: fewest locations, then avoid low indices.
  MilpProblem canon = p;
  canon.lp.objective.assign(canon.lp.num_variables(), 0.0);
  for (std::size_t x = 0; x < v.y.size(); ++x) {
    canon.lp.objective[v.y[x]] = -(1.0 + std::ldexp(1.0, -static_cast<int>(x) - 1));
  }
  canon.lp.add_constraint({{v.z, 1.0}}, Relation::greater_equal, out.value - 1e-9);
  MilpOptions opt;
  opt.initial_incumbent = first.x;
  const auto second = solve_or_throw(canon, "covering-set canonicalization", opt);
  out.nodes += second.nodes;
  const auto& y = second.status == MilpStatus::optimal ? second.x : first.x;
  for (std::size_t x = 0; x < v.y.size(); ++x) {
    if (y[v.y[x]] > 0.5) out.chosen.push_back(x);
  }
  finish_gcs(inst, r, out);
  return out;
}

/// Cheapest set of locations covering `must` when location x costs
/// max(0, (level - crit_x) / (1 - crit_x)), the marginal it needs to reach
/// `level`. Redundant locations are then dropped, highest index first.
struct CoverAtLevel {
  double cost = 0.0;
  std::vector<LocationIndex> locations;
  std::size_t nodes = 0;
};

/// Empty when no set within the support cap covers `must`.
inline std::optional<CoverAtLevel> cheapest_cover(const Instance& inst, const std::vector<double>& crit,
                                   const std::vector<ComponentIndex>& must, double level,
                                   std::optional<int> max_support) {
  const std::size_t n = inst.num_locations();
  MilpProblem p;
  p.lp.sense = Sense::minimize;
  for (std::size_t x = 0; x < n; ++x) {
    const double c = std::max(0.0, (level - crit[x]) / (1.0 - crit[x]));
    p.binaries.push_back(p.lp.add_variable(c, 0.0, 1.0));
  }
  for (ComponentIndex u : must) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (LocationIndex x : inst.covering_locations(u)) terms.push_back({x, 1.0});
    p.lp.add_constraint(terms, Relation::greater_equal, 1.0);
  }
  if (max_support) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t x = 0; x < n; ++x) terms.push_back({x, 1.0});
    p.lp.add_constraint(terms, Relation::less_equal, static_cast<double>(*max_support));
  }
  const auto s = solve_or_throw(p, "weighted set cover");
  if (s.status != MilpStatus::optimal) return std::nullopt;
  CoverAtLevel out;
  out.cost = s.objective;
  out.nodes = s.nodes;
  std::vector<int> hits(inst.num_components(), 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (s.x[x] > 0.5) {
      out.locations.push_back(x);
      for (ComponentIndex u : inst.monitoring_set(x)) ++hits[u];
    }
  }
  std::vector<char> needed(inst.num_components(), 0);
  for (ComponentIndex u : must) needed[u] = 1;
  for (std::size_t i = out.locations.size(); i-- > 0;) {
    const auto set = inst.monitoring_set(out.locations[i]);
    const bool redundant = std::all_of(set.begin(), set.end(), [&](ComponentIndex u) {
      return !needed[u] || hits[u] > 1;
    });
    if (!redundant) continue;
    for (ComponentIndex u : set) --hits[u];
    out.locations.erase(out.locations.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

/// For each security level tau, sets C covering every component below tau
/// keep min over uncovered components at >= tau; among them maximize the
/// spread level by parametric search on the cheapest cover. The optimum is
/// the best min(tau, level) over all tau.
inline GcsResult solve_gcs_threshold(const Instance& inst, int r,
                                     std::optional<int> max_support) {
  require_valid(inst);
  detail::require_budget(inst, r);
  if (max_support && *max_support < r) {
    throw InputError("max support " + std::to_string(*max_support) +
                     " is below the budget r = " + std::to_string(r));
  }
  std::vector<double> crit(inst.num_locations());
  for (LocationIndex x = 0; x < crit.size(); ++x) crit[x] = location_criticality(inst, x);
  std::vector<double> thresholds = inst.security_levels();
  thresholds.push_back(1.0);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  GcsResult out;
  out.value = -1.0;
  for (double tau : thresholds) {
    if (tau <= out.value + 1e-12) continue;
    std::vector<ComponentIndex> must;
    for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
      if (inst.security_level(u) < tau) must.push_back(u);
    }
    auto cover = cheapest_cover(inst, crit, must, 0.0, max_support);
    if (!cover) continue;
    out.nodes += cover->nodes;
    auto best = cover->locations;
    double level = spread_level(inst, best, r);
    // Each round finds a cover that reaches strictly higher, or proves that
    // no cover can: the cheapest cover already needs all r sensors.
    while (level < 1.0) {
      cover = cheapest_cover(inst, crit, must, level, max_support);
      out.nodes += cover->nodes;
      if (cover->cost >= r - 1e-9) break;
      const double next = spread_level(inst, cover->locations, r);
      if (next <= level + 1e-12) break;
      level = next;
      best = cover->locations;
    }
    const double value = std::min(tau, level);
    if (value > out.value + 1e-12) {
      out.value = value;
      out.chosen = best;
    }
  }
  finish_gcs(inst, r, out);
  return out;
}

}  // namespace detail

/// Optimal value of the covering-set model, the set C attaining it and the
/// optimal marginals on C.
inline GcsResult solve_gcs(const Instance& inst, int r, std::optional<int> max_support = {},
                           GcsMethod method = GcsMethod::threshold) {
  return method == GcsMethod::milp ? detail::solve_gcs_milp(inst, r, max_support)
                                   : detail::solve_gcs_threshold(inst, r, max_support);
}

struct UpperBoundResult {
  double value = 1.0;
  std::vector<ComponentIndex> packing;  // empty when value is 1
  int max_packing = 0;
  std::size_t nodes = 0;
};

/// How the packing bound is computed. Both return the same value.
///   by_size  lightest packing of each admissible size, then the best ratio
///   milp     the big-M nonlinear packing model, solved whole
enum class UpperBoundMethod { by_size, milp };

inline UpperBoundMethod parse_upper_bound_method(const std::string& s) {
  if (s == "by_size") return UpperBoundMethod::by_size;
  if (s == "milp") return UpperBoundMethod::milp;
  throw InputError("unknown packing-bound method '" + s + "'");
}

struct LightestPacking {
  double weight = 0.0;  // sum of 1 / (1 - phi_u)
  std::vector<ComponentIndex> components;
  std::size_t nodes = 0;
};

/// Packing of exactly `size` components with the least total weight, or
/// empty when no packing has that size.
inline std::optional<LightestPacking> lightest_packing(const Instance& inst, int size) {
  require_valid(inst);
  MilpProblem p;
  p.lp.sense = Sense::minimize;
  std::vector<std::pair<std::size_t, double>> count;
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    p.binaries.push_back(p.lp.add_variable(1.0 / (1.0 - inst.security_level(u)), 0.0, 1.0));
    count.push_back({u, 1.0});
  }
  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (ComponentIndex u : inst.monitoring_set(x)) terms.push_back({u, 1.0});
    p.lp.add_constraint(terms, Relation::less_equal, 1.0);
  }
  p.lp.add_constraint(count, Relation::equal, static_cast<double>(size));
  const auto s = detail::solve_or_throw(p, "lightest packing");
  if (s.status != MilpStatus::optimal) return std::nullopt;
  LightestPacking out;
  out.nodes = s.nodes;
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    if (s.x[u] > 0.5) {
      out.components.push_back(u);
      out.weight += 1.0 / (1.0 - inst.security_level(u));
    }
  }
  return out;
}

/// min{1, min over packings T with |T| > r of 1 - (|T| - r) / S_T}.
inline UpperBoundResult upper_bound(const Instance& inst, int r,
                                    UpperBoundMethod method = UpperBoundMethod::by_size) {
  if (r < 1) throw InputError("budget r must be >= 1");
  UpperBoundResult out;
  out.max_packing = max_set_packing(inst).size;
  if (out.max_packing <= r) return out;
  double ratio = kInfinity;  // S_T / (|T| - r) of the best packing so far
  if (method == UpperBoundMethod::milp) {
    auto [p, v] = build_nsp(inst, r, out.max_packing);
    const auto s = detail::solve_or_throw(p, "set-packing bound");
    out.nodes = s.nodes;
    if (s.status == MilpStatus::infeasible) return out;
    ratio = s.objective;
    for (std::size_t u = 0; u < v.y.size(); ++u) {
      if (s.x[v.y[u]] > 0.5) out.packing.push_back(u);
    }
  } else {
    for (int size = r + 1; size <= out.max_packing; ++size) {
      const auto t = lightest_packing(inst, size);
      if (!t) continue;
      out.nodes += t->nodes;
      const double candidate = t->weight / (size - r);
      if (candidate < ratio - 1e-12) {
        ratio = candidate;
        out.packing = t->components;
      }
    }
    if (std::isinf(ratio)) return out;
  }
  out.value = std::min(1.0, 1.0 - 1.0 / ratio);
  return out;
}

struct ApproxSolution {
  MixedStrategy strategy;
  double lower = 0.0;
  double achieved = 0.0;
  double upper = 1.0;
  double gap = 0.0;           // upper - max(lower, achieved)
  double relative_gap = 0.0;  // gap / upper
  std::vector<LocationIndex> chosen;
  std::vector<ComponentIndex> packing;
  double time_lower = 0.0;  // seconds, including the decomposition
  double time_upper = 0.0;
};

namespace detail {

inline void finish(const Instance& inst, ApproxSolution& s) {
  s.achieved = evaluate_strategy(inst, s.strategy).value;
  s.gap = std::max(0.0, s.upper - std::max(s.lower, s.achieved));
  s.relative_gap = s.upper > 0.0 ? s.gap / s.upper : 0.0;
}

/// Min cover padded with the lowest unused indices up to r locations.
inline Placement padded_cover(const Instance& inst, const CoverResult& cover, int r) {
  std::vector<LocationIndex> locs = cover.locations;
  for (LocationIndex x = 0; static_cast<int>(locs.size()) < r && x < inst.num_locations(); ++x) {
    if (std::find(cover.locations.begin(), cover.locations.end(), x) == cover.locations.end()) {
      locs.push_back(x);
    }
  }
  return Placement(std::move(locs));
}

}  // namespace detail

inline ApproxSolution solve_approx(const Instance& inst, int r,
                                   std::optional<int> max_support = {},
                                   GcsMethod gcs_method = GcsMethod::threshold,
                                   UpperBoundMethod ub_method = UpperBoundMethod::by_size) {
  require_valid(inst);
  detail::require_budget(inst, r);
  ApproxSolution out;
  Stopwatch lower_clock;
  const auto cover = min_set_cover(inst);
  if (r >= cover.size) {
    out.strategy = MixedStrategy::point_mass(detail::padded_cover(inst, cover, r));
    out.chosen = cover.locations;
    out.lower = out.upper = 1.0;
    out.time_lower = lower_clock.seconds();
    detail::finish(inst, out);
    return out;
  }
  const auto gcs = solve_gcs(inst, r, max_support, gcs_method);
  out.lower = gcs.value;
  out.chosen = gcs.chosen;
  out.strategy = decompose(gcs.marginals, r);
  out.time_lower = lower_clock.seconds();

  Stopwatch upper_clock;
  const auto ub = upper_bound(inst, r, ub_method);
  out.upper = ub.value;
  out.packing = ub.packing;
  out.time_upper = upper_clock.seconds();
  detail::finish(inst, out);
  return out;
}

/// Closed form when every component has the same security level.
inline ApproxSolution homogeneous_solution(const Instance& inst, int r) {
  require_valid(inst);
  if (!has_homogeneous_levels(inst)) {
    throw PreconditionError("security levels are not identical");
  }
  detail::require_budget(inst, r);
  const auto cover = min_set_cover(inst);
  const int n_star = cover.size;
  if (r >= n_star) {
    throw PreconditionError("budget r must be below the minimum cover size " +
                            std::to_string(n_star));
  }
  const auto packing = max_set_packing(inst);
  const double phi = inst.security_level(0);
  ApproxSolution out;
  out.lower = phi + (1.0 - phi) * r / n_star;
  out.upper = std::min(1.0, phi + (1.0 - phi) * r / packing.size);
  out.chosen = cover.locations;
  out.packing = packing.components;

  // Windows of r consecutive cover locations, stepping by r around the cycle.
  const int atoms = n_star / std::gcd(n_star, r);
  std::vector<Atom> mix;
  for (int t = 0; t < atoms; ++t) {
    std::vector<LocationIndex> locs;
    for (int j = 0; j < r; ++j) locs.push_back(cover.locations[(t * r + j) % n_star]);
    mix.push_back({Placement(std::move(locs)), 1.0 / atoms});
  }
  out.strategy = MixedStrategy(std::move(mix));
  detail::finish(inst, out);
  return out;
}

/// Closed form when monitoring sets are pairwise disjoint: the bounds meet.
inline ApproxSolution disjoint_solution(const Instance& inst, int r) {
  require_valid(inst);
  if (!has_disjoint_sets(inst)) throw PreconditionError("monitoring sets overlap");
  detail::require_budget(inst, r);
  std::vector<LocationIndex> all(inst.num_locations());
  std::iota(all.begin(), all.end(), LocationIndex{0});
  ApproxSolution out;
  out.chosen = all;
  if (static_cast<std::size_t>(r) == all.size()) {
    out.strategy = MixedStrategy::point_mass(Placement(all));
    out.lower = out.upper = 1.0;
    detail::finish(inst, out);
    return out;
  }
  const auto ks = k_star(inst, all, r);
  out.lower = ks.value;
  out.strategy = decompose(optimal_marginals(inst, all, r), r);
  // One most critical component from each of the k* most critical locations
  // is a packing whose bound equals the lower bound.
  double s = 0.0;
  for (std::size_t l = 0; l < ks.count; ++l) {
    const auto set = inst.monitoring_set(ks.order[l]);
    const auto worst = *std::min_element(set.begin(), set.end(), [&](auto a, auto b) {
      return inst.security_level(a) < inst.security_level(b);
    });
    out.packing.push_back(worst);
    s += 1.0 / (1.0 - inst.security_level(worst));
  }
  std::sort(out.packing.begin(), out.packing.end());
  out.upper = std::min(1.0, 1.0 - (static_cast<double>(ks.count) - r) / s);
  detail::finish(inst, out);
  return out;
}

}  // namespace netmon
