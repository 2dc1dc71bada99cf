#pragma once

// Optimization models over an Instance, expressed as LpProblem / MilpProblem.
//
//   gcs  generalized covering set model; optimum is the lower bound and
//        carries optimal marginals
//   nsp  nonlinear set packing model; optimum z gives the bound 1 - 1/z
//   mwc  maximum weighted covering; pricing and best-response problem
//   full enumerated LP over all placements of size r
//   restricted master over a given list of placements

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netmon/dense_lp.hpp"
#include "netmon/errors.hpp"
#include "netmon/instance.hpp"
#include "netmon/milp.hpp"

namespace netmon {

struct GcsVariables {
  std::vector<std::size_t> y;    // per location, binary
  std::vector<std::size_t> rho;  // per location, marginal
  std::size_t z = 0;
  double big_m = 0.0;
};

struct NspVariables {
  std::vector<std::size_t> y;  // per component, binary
  std::vector<std::size_t> z;  // z[i] selects packing size first_size + i
  std::vector<std::size_t> t;
  std::size_t first_size = 0;
  double big_m = 0.0;
  /// No packing larger than r is admissible; the problem is trivially infeasible.
  bool infeasible = false;
};

struct McwVariables {
  std::vector<std::size_t> y;  // per component, covered
  std::vector<std::size_t> z;  // per location, sensor placed
  double constant = 0.0;
};

namespace detail {

inline void require_budget(const Instance& inst, int r) {
  if (r < 1) throw InputError("budget r must be >= 1, got " + std::to_string(r));
  if (static_cast<std::size_t>(r) > inst.num_locations()) {
    throw InputError("budget r = " + std::to_string(r) + " exceeds the " +
                     std::to_string(inst.num_locations()) + " locations");
  }
}

inline double min_level(const Instance& inst) {
  const auto& v = inst.security_levels();
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

inline double max_level(const Instance& inst) {
  const auto& v = inst.security_levels();
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace detail

inline std::pair<MilpProblem, GcsVariables> build_gcs(const Instance& inst, int r,
                                                      std::optional<int> max_support = {}) {
  require_valid(inst);
  detail::require_budget(inst, r);
  if (max_support && *max_support < r) {
    throw InputError("max support " + std::to_string(*max_support) +
                     " is below the budget r = " + std::to_string(r));
  }
  const std::size_t n = inst.num_locations();
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  GcsVariables v;
  v.big_m = 1.0 - detail::min_level(inst);
  for (std::size_t x = 0; x < n; ++x) {
    v.y.push_back(p.lp.add_variable(0.0, 0.0, 1.0));
    p.binaries.push_back(v.y.back());
  }
  for (std::size_t x = 0; x < n; ++x) v.rho.push_back(p.lp.add_variable(0.0, 0.0, 1.0));
  v.z = p.lp.add_variable(1.0, -kInfinity, kInfinity);

  for (LocationIndex x = 0; x < n; ++x) {
    const double crit = location_criticality(inst, x);
    p.lp.add_constraint({{v.z, 1.0}, {v.rho[x], -(1.0 - crit)}, {v.y[x], v.big_m}},
                        Relation::less_equal, crit + v.big_m);
  }
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    std::vector<std::pair<std::size_t, double>> terms{{v.z, 1.0}};
    for (LocationIndex x : inst.covering_locations(u)) terms.push_back({v.y[x], -v.big_m});
    p.lp.add_constraint(terms, Relation::less_equal, inst.security_level(u));
  }
  for (std::size_t x = 0; x < n; ++x) {
    p.lp.add_constraint({{v.rho[x], 1.0}, {v.y[x], -1.0}}, Relation::less_equal, 0.0);
  }
  std::vector<std::pair<std::size_t, double>> total;
  for (std::size_t x = 0; x < n; ++x) total.push_back({v.rho[x], 1.0});
  p.lp.add_constraint(total, Relation::equal, static_cast<double>(r));
  if (max_support) {
    std::vector<std::pair<std::size_t, double>> support;
    for (std::size_t x = 0; x < n; ++x) support.push_back({v.y[x], 1.0});
    p.lp.add_constraint(support, Relation::less_equal, static_cast<double>(*max_support));
  }
  return {std::move(p), std::move(v)};
}

/// Packing sizes range over r+1 .. cap (default |U|).
inline std::pair<MilpProblem, NspVariables> build_nsp(const Instance& inst, int r,
                                                      std::optional<int> packing_size_cap = {}) {
  require_valid(inst);
  if (r < 1) throw InputError("budget r must be >= 1, got " + std::to_string(r));
  const std::size_t m = inst.num_components();
  const std::size_t cap =
      packing_size_cap ? static_cast<std::size_t>(std::max(*packing_size_cap, 0)) : m;
  MilpProblem p;
  p.lp.sense = Sense::minimize;
  NspVariables v;
  v.first_size = static_cast<std::size_t>(r) + 1;
  v.big_m = static_cast<double>(cap) / (1.0 - detail::max_level(inst));
  if (cap < v.first_size || cap > m) {
    if (cap > m) throw InputError("packing size cap exceeds the number of components");
    v.infeasible = true;
    const auto dummy = p.lp.add_variable(0.0, 0.0, 0.0);
    p.lp.add_constraint({{dummy, 1.0}}, Relation::greater_equal, 1.0);
    return {std::move(p), std::move(v)};
  }
  for (std::size_t u = 0; u < m; ++u) {
    v.y.push_back(p.lp.add_variable(0.0, 0.0, 1.0));
    p.binaries.push_back(v.y.back());
  }
  for (std::size_t l = v.first_size; l <= cap; ++l) {
    v.z.push_back(p.lp.add_variable(0.0, 0.0, 1.0));
    p.binaries.push_back(v.z.back());
  }
  for (std::size_t l = v.first_size; l <= cap; ++l) {
    v.t.push_back(p.lp.add_variable(1.0 / static_cast<double>(l - r), 0.0, kInfinity));
  }

  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (ComponentIndex u : inst.monitoring_set(x)) terms.push_back({v.y[u], 1.0});
    p.lp.add_constraint(terms, Relation::less_equal, 1.0);
  }
  std::vector<std::pair<std::size_t, double>> size_terms, pick_terms;
  for (std::size_t u = 0; u < m; ++u) size_terms.push_back({v.y[u], 1.0});
  for (std::size_t i = 0; i < v.z.size(); ++i) {
    size_terms.push_back({v.z[i], -static_cast<double>(v.first_size + i)});
    pick_terms.push_back({v.z[i], 1.0});
  }
  p.lp.add_constraint(size_terms, Relation::equal, 0.0);
  p.lp.add_constraint(pick_terms, Relation::equal, 1.0);
  for (std::size_t i = 0; i < v.t.size(); ++i) {
    std::vector<std::pair<std::size_t, double>> terms{{v.t[i], 1.0}, {v.z[i], -v.big_m}};
    for (std::size_t u = 0; u < m; ++u) {
      terms.push_back({v.y[u], -1.0 / (1.0 - inst.security_level(u))});
    }
    p.lp.add_constraint(terms, Relation::greater_equal, -v.big_m);
  }
  return {std::move(p), std::move(v)};
}

/// Objective: constant + sum_u w_u (phi_u + (1 - phi_u) y_u) over size-r placements.
inline std::pair<MilpProblem, McwVariables> build_mwc(const Instance& inst, int r,
                                                      const std::vector<double>& weights,
                                                      double constant_term) {
  require_valid(inst);
  detail::require_budget(inst, r);
  if (weights.size() != inst.num_components()) {
    throw InputError("expected " + std::to_string(inst.num_components()) +
                     " component weights, got " + std::to_string(weights.size()));
  }
  double base = constant_term;
  for (std::size_t u = 0; u < weights.size(); ++u) {
    if (!(weights[u] >= 0.0) || !std::isfinite(weights[u])) {
      throw InputError("component weight for " + inst.component_id(u) + " must be >= 0");
    }
    base += weights[u] * inst.security_level(u);
  }
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  McwVariables v;
  v.constant = constant_term;
  for (std::size_t u = 0; u < weights.size(); ++u) {
    v.y.push_back(p.lp.add_variable(weights[u] * (1.0 - inst.security_level(u)), 0.0, 1.0));
    p.binaries.push_back(v.y.back());
  }
  for (std::size_t x = 0; x < inst.num_locations(); ++x) {
    v.z.push_back(p.lp.add_variable(0.0, 0.0, 1.0));
    p.binaries.push_back(v.z.back());
  }
  // The constant is carried by a fixed variable so objectives read directly.
  p.lp.add_variable(base, 1.0, 1.0);
  for (ComponentIndex u = 0; u < weights.size(); ++u) {
    std::vector<std::pair<std::size_t, double>> terms{{v.y[u], 1.0}};
    for (LocationIndex x : inst.covering_locations(u)) terms.push_back({v.z[x], -1.0});
    p.lp.add_constraint(terms, Relation::less_equal, 0.0);
  }
  std::vector<std::pair<std::size_t, double>> total;
  for (std::size_t x = 0; x < inst.num_locations(); ++x) total.push_back({v.z[x], 1.0});
  p.lp.add_constraint(total, Relation::equal, static_cast<double>(r));
  return {std::move(p), std::move(v)};
}

/// Placement read off a solved mwc model.
inline Placement mwc_placement(const McwVariables& v, const std::vector<double>& x) {
  std::vector<LocationIndex> chosen;
  for (std::size_t i = 0; i < v.z.size(); ++i) {
    if (x[v.z[i]] > 0.5) chosen.push_back(i);
  }
  return Placement(std::move(chosen));
}

inline constexpr double kEnumerationLimit = 2e6;

/// Binomial coefficient in floating point; exact for the sizes that pass the guard.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

/// Every sorted size-r subset of {0..n-1}, in lexicographic order.
inline std::vector<Placement> all_placements(std::size_t n, int r) {
  const double count = binomial(n, static_cast<std::size_t>(r));
  if (count > kEnumerationLimit) {
    throw CapacityError("enumerating " + std::to_string(static_cast<long long>(count)) +
                            " placements exceeds the limit of 2000000",
                        count);
  }
  std::vector<Placement> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<LocationIndex> pick(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  while (true) {
    out.emplace_back(pick);
    std::size_t i = pick.size();
    while (i > 0 && pick[i - 1] == n - pick.size() + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

struct MasterLp {
  LpProblem lp;
  std::vector<Placement> columns;  // sigma variable i is column i
  std::size_t z = 0;
  std::size_t first_component_row = 0;  // rows [0, |U|) bound z by each component
  std::size_t sum_row = 0;
};

/// max z  s.t.  z <= sum_X sigma_X f(X,u) for all u,  sum sigma = 1,  sigma >= 0.
inline MasterLp build_restricted_master(const Instance& inst, std::vector<Placement> columns) {
  require_valid(inst);
  if (columns.empty()) throw InputError("restricted master needs at least one column");
  MasterLp m;
  m.lp.sense = Sense::maximize;
  m.columns = std::move(columns);
  for (std::size_t i = 0; i < m.columns.size(); ++i) {
    check_placement(inst, m.columns[i]);
    m.lp.add_variable(0.0, 0.0, kInfinity);
  }
  m.z = m.lp.add_variable(1.0, -kInfinity, kInfinity);
  std::vector<std::vector<char>> covered;
  covered.reserve(m.columns.size());
  for (const auto& c : m.columns) covered.push_back(covered_components(inst, c));
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    std::vector<std::pair<std::size_t, double>> terms{{m.z, 1.0}};
    for (std::size_t i = 0; i < m.columns.size(); ++i) {
      terms.push_back({i, -(covered[i][u] ? 1.0 : inst.security_level(u))});
    }
    m.lp.add_constraint(terms, Relation::less_equal, 0.0);
  }
  std::vector<std::pair<std::size_t, double>> total;
  for (std::size_t i = 0; i < m.columns.size(); ++i) total.push_back({i, 1.0});
  m.sum_row = m.lp.add_constraint(total, Relation::equal, 1.0);
  return m;
}

/// The restricted master over every placement of size exactly r.
inline MasterLp build_full_lp(const Instance& inst, int r) {
  require_valid(inst);
  detail::require_budget(inst, r);
  return build_restricted_master(inst, all_placements(inst.num_locations(), r));
}

}  // namespace netmon
