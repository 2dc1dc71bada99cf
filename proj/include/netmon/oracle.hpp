#pragma once

// Brute-force reference solvers for small instances. They share no code with
// the model builders or branch-and-bound: placements, subsets and packings are
// enumerated here, and the exact value is certified by checking the LP's
// primal and dual solutions against every placement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "netmon/dense_lp.hpp"
#include "netmon/errors.hpp"
#include "netmon/instance.hpp"

namespace netmon {

struct ExactSolution {
  double value = 0.0;
  MixedStrategy strategy;
  /// Attacker distribution from the LP duals; certifies optimality.
  AttackerStrategy attacker;
  std::size_t placements = 0;
};

inline constexpr double kOracleLimit = 2e6;
inline constexpr std::size_t kOracleMaxElements = 20;

namespace oracle_detail {

inline double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return std::round(c);
}

/// Post-security table f[p][u] for every size-r subset, lexicographic.
inline void enumerate(const Instance& inst, int r, std::vector<Placement>& out) {
  const std::size_t n = inst.num_locations(), k = static_cast<std::size_t>(r);
  std::vector<LocationIndex> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<double> payoffs(const Instance& inst, const Placement& p) {
  std::vector<double> f = inst.security_levels();
  for (LocationIndex x : p.locations()) {
    for (ComponentIndex u : inst.monitoring_set(x)) f[u] = 1.0;
  }
  return f;
}

/// Water level of the most critical locations in `crit` sharing r units.
inline double spread(std::vector<double> crit, int r) {
  if (crit.size() <= static_cast<std::size_t>(r)) return 1.0;
  std::sort(crit.begin(), crit.end());
  double s = 0.0;
  double level = 1.0;
  for (std::size_t k = 1; k <= crit.size(); ++k) {
    s += 1.0 / (1.0 - crit[k - 1]);
    const double v = k <= static_cast<std::size_t>(r) ? 1.0 : 1.0 - (k - r) / s;
    if (v > crit[k - 1]) level = v;
  }
  return std::min(1.0, level);
}

}  // namespace oracle_detail

/// Game value by the LP over every placement of size r, with a
/// primal/dual check against all placements.
inline ExactSolution solve_exact(const Instance& inst, int r) {
  require_valid(inst);
  if (r < 1 || static_cast<std::size_t>(r) > inst.num_locations()) {
    throw InputError("budget r out of range");
  }
  const double count = oracle_detail::choose(inst.num_locations(), r);
  if (count > kOracleLimit) {
    throw CapacityError("exact oracle would enumerate " +
                            std::to_string(static_cast<long long>(count)) + " placements",
                        count);
  }
  std::vector<Placement> all;
  oracle_detail::enumerate(inst, r, all);
  const std::size_t m = inst.num_components();
  std::vector<std::vector<double>> f;
  f.reserve(all.size());
  for (const auto& p : all) f.push_back(oracle_detail::payoffs(inst, p));

  // max v  s.t.  v - sum_p s_p f_pu <= 0,  sum_p s_p = 1.
  LpProblem lp;
  lp.sense = Sense::maximize;
  for (std::size_t i = 0; i < all.size(); ++i) lp.add_variable(0.0);
  const std::size_t v = lp.add_variable(1.0, -kInfinity, kInfinity);
  for (ComponentIndex u = 0; u < m; ++u) {
    std::vector<std::pair<std::size_t, double>> row{{v, 1.0}};
    for (std::size_t i = 0; i < all.size(); ++i) row.push_back({i, -f[i][u]});
    lp.add_constraint(row, Relation::less_equal, 0.0);
  }
  std::vector<std::pair<std::size_t, double>> total;
  for (std::size_t i = 0; i < all.size(); ++i) total.push_back({i, 1.0});
  lp.add_constraint(total, Relation::equal, 1.0);
  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw InvariantError("exact oracle LP not optimal");

  std::vector<Atom> atoms;
  double mass = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (sol.x[i] > 1e-12) {
      atoms.push_back({all[i], sol.x[i]});
      mass += sol.x[i];
    }
  }
  for (auto& a : atoms) a.probability /= mass;
  std::vector<double> alpha(m);
  double alpha_sum = 0.0;
  for (ComponentIndex u = 0; u < m; ++u) alpha_sum += alpha[u] = std::max(0.0, sol.duals[u]);
  for (auto& a : alpha) a /= alpha_sum;

  // Primal: the strategy guarantees `lower` on every component. Dual: no
  // placement beats `upper` against alpha. Both must meet.
  double lower = 1.0;
  for (ComponentIndex u = 0; u < m; ++u) {
    double e = 0.0;
    for (const auto& a : atoms) {
      const auto idx = std::lower_bound(all.begin(), all.end(), a.placement) - all.begin();
      e += a.probability * f[idx][u];
    }
    lower = std::min(lower, e);
  }
  double upper = 0.0;
  for (const auto& row : f) {
    double e = 0.0;
    for (ComponentIndex u = 0; u < m; ++u) e += alpha[u] * row[u];
    upper = std::max(upper, e);
  }
  if (upper - lower > 1e-9) {
    throw InvariantError("exact oracle certificate gap " + std::to_string(upper - lower));
  }
  ExactSolution out;
  out.value = lower;
  out.strategy = MixedStrategy(std::move(atoms));
  out.attacker = AttackerStrategy{std::move(alpha)};
  out.placements = all.size();
  return out;
}

/// max over nonempty C of min(spread level of C, lowest level outside U_C).
inline double brute_gcs(const Instance& inst, int r) {
  require_valid(inst);
  const std::size_t n = inst.num_locations(), m = inst.num_components();
  if (n > kOracleMaxElements) {
    throw CapacityError("brute_gcs supports at most 20 locations", std::ldexp(1.0, static_cast<int>(n)));
  }
  std::vector<double> crit(n, 1.0);
  for (LocationIndex x = 0; x < n; ++x) {
    for (ComponentIndex u : inst.monitoring_set(x)) crit[x] = std::min(crit[x], inst.security_level(u));
  }
  double best = 0.0;
  std::vector<int> hits(m);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    std::fill(hits.begin(), hits.end(), 0);
    std::vector<double> c;
    for (LocationIndex x = 0; x < n; ++x) {
      if (!(mask >> x & 1u)) continue;
      c.push_back(crit[x]);
      for (ComponentIndex u : inst.monitoring_set(x)) hits[u] = 1;
    }
    double v = oracle_detail::spread(c, r);
    for (ComponentIndex u = 0; u < m; ++u) {
      if (!hits[u]) v = std::min(v, inst.security_level(u));
    }
    best = std::max(best, v);
  }
  return best;
}

/// min(1, min over packings T with |T| > r of 1 - (|T| - r) / sum_T 1/(1 - phi)).
inline double brute_ub(const Instance& inst, int r) {
  require_valid(inst);
  const std::size_t m = inst.num_components();
  if (m > kOracleMaxElements) {
    throw CapacityError("brute_ub supports at most 20 components", std::ldexp(1.0, static_cast<int>(m)));
  }
  std::vector<std::vector<LocationIndex>> where(m);
  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    for (ComponentIndex u : inst.monitoring_set(x)) where[u].push_back(x);
  }
  std::vector<int> used(inst.num_locations(), 0);
  double best = 1.0;
  // Depth-first: decide each component in turn, extending only while every
  // location is hit at most once.
  auto dfs = [&](auto&& self, std::size_t u, std::size_t size, double s) -> void {
    if (u == m) {
      if (size > static_cast<std::size_t>(r)) best = std::min(best, 1.0 - (size - r) / s);
      return;
    }
    self(self, u + 1, size, s);
    for (LocationIndex x : where[u]) {
      if (used[x]) return;
    }
    for (LocationIndex x : where[u]) used[x] = 1;
    self(self, u + 1, size + 1, s + 1.0 / (1.0 - inst.security_level(u)));
    for (LocationIndex x : where[u]) used[x] = 0;
  };
  dfs(dfs, 0, 0, 0.0);
  return best;
}

}  // namespace netmon
