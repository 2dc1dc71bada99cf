#pragma once

// Enumeration oracles for tests. Written against the raw instance data only,
// so they share no code with the models they check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "netmon/instance.hpp"

namespace netmon::testing {

inline double payoff(const Instance& inst, const std::vector<std::size_t>& locs,
                     std::size_t u) {
  for (std::size_t x : locs) {
    const auto set = inst.monitoring_set(x);
    if (std::find(set.begin(), set.end(), u) != set.end()) return 1.0;
  }
  return inst.security_level(u);
}

inline double crit(const Instance& inst, std::size_t x) {
  double c = 1.0;
  for (std::size_t u : inst.monitoring_set(x)) c = std::min(c, inst.security_level(u));
  return c;
}

/// Equalized level of the best marginals on C when |C| > r, straight from the
/// water-filling picture: pick the largest k whose k-th criticality stays
/// below the level obtained by spreading r over the k most critical.
inline double spread_value(const Instance& inst, std::vector<std::size_t> c, int r) {
  std::stable_sort(c.begin(), c.end(),
                   [&](std::size_t a, std::size_t b) { return crit(inst, a) < crit(inst, b); });
  double best = 0.0, s = 0.0;
  for (std::size_t k = 1; k <= c.size(); ++k) {
    s += 1.0 / (1.0 - crit(inst, c[k - 1]));
    const double level = 1.0 - (static_cast<double>(k) - r) / s;
    if (crit(inst, c[k - 1]) <= level + 1e-9) best = level;
  }
  return best;
}

/// Lower-bound objective of a fixed location set C.
inline double gcs_subset_value(const Instance& inst, const std::vector<std::size_t>& c, int r) {
  double v = static_cast<int>(c.size()) <= r ? 1.0 : spread_value(inst, c, r);
  for (std::size_t u = 0; u < inst.num_components(); ++u) {
    if (payoff(inst, c, u) < 1.0) v = std::min(v, inst.security_level(u));
  }
  return v;
}

inline std::vector<std::size_t> bits(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1u) out.push_back(i);
  }
  return out;
}

inline double brute_lower(const Instance& inst, int r) {
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << inst.num_locations()); ++mask) {
    best = std::max(best, gcs_subset_value(inst, bits(mask), r));
  }
  return best;
}

inline bool is_packing(const Instance& inst, const std::vector<std::size_t>& t) {
  for (std::size_t x = 0; x < inst.num_locations(); ++x) {
    int hits = 0;
    for (std::size_t u : inst.monitoring_set(x)) {
      hits += std::count(t.begin(), t.end(), u) > 0;
    }
    if (hits > 1) return false;
  }
  return true;
}

/// min over packings T with |T| > r of S_T / (|T| - r); +inf when none exist.
inline double brute_packing_ratio(const Instance& inst, int r) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << inst.num_components()); ++mask) {
    const auto t = bits(mask);
    if (static_cast<int>(t.size()) <= r || !is_packing(inst, t)) continue;
    double s = 0.0;
    for (std::size_t u : t) s += 1.0 / (1.0 - inst.security_level(u));
    best = std::min(best, s / (static_cast<double>(t.size()) - r));
  }
  return best;
}

inline double brute_upper(const Instance& inst, int r) {
  const double z = brute_packing_ratio(inst, r);
  return std::isinf(z) ? 1.0 : std::min(1.0, 1.0 - 1.0 / z);
}

inline void for_each_subset_of_size(std::size_t n, int r,
                                    const std::function<void(const std::vector<std::size_t>&)>& f) {
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == r) f(bits(mask));
  }
}

inline double brute_weighted_cover(const Instance& inst, int r, const std::vector<double>& w,
                                   double constant) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_subset_of_size(inst.num_locations(), r, [&](const auto& locs) {
    double v = constant;
    for (std::size_t u = 0; u < w.size(); ++u) v += w[u] * payoff(inst, locs, u);
    best = std::max(best, v);
  });
  return best;
}

inline int brute_min_cover(const Instance& inst) {
  int best = static_cast<int>(inst.num_locations());
  for (std::uint32_t mask = 1; mask < (1u << inst.num_locations()); ++mask) {
    const auto c = bits(mask);
    bool ok = true;
    for (std::size_t u = 0; u < inst.num_components() && ok; ++u) ok = payoff(inst, c, u) == 1.0;
    if (ok) best = std::min(best, static_cast<int>(c.size()));
  }
  return best;
}

inline int brute_max_packing(const Instance& inst) {
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << inst.num_components()); ++mask) {
    const auto t = bits(mask);
    if (is_packing(inst, t)) best = std::max(best, static_cast<int>(t.size()));
  }
  return best;
}

/// Random instance on the four-level scale; every location gets a nonempty
/// set and every component is covered.
inline Instance random_instance(std::mt19937_64& rng, std::size_t nx, std::size_t nu,
                                double density) {
  static constexpr double kLevels[] = {0.2, 0.4, 0.6, 0.8};
  std::vector<std::string> locs, comps;
  std::vector<std::pair<std::string, double>> levels;
  for (std::size_t x = 0; x < nx; ++x) locs.push_back("x" + std::to_string(x));
  for (std::size_t u = 0; u < nu; ++u) {
    comps.push_back("u" + std::to_string(u));
    levels.push_back({comps.back(), kLevels[rng() % 4]});
  }
  std::vector<std::vector<char>> in(nx, std::vector<char>(nu, 0));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < nu; ++u) in[x][u] = coin(rng) < density;
  }
  for (std::size_t u = 0; u < nu; ++u) in[rng() % nx][u] = 1;
  for (std::size_t x = 0; x < nx; ++x) {
    if (std::none_of(in[x].begin(), in[x].end(), [](char c) { return c; })) in[x][rng() % nu] = 1;
  }
  std::map<std::string, std::vector<std::string>> sets;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < nu; ++u) {
      if (in[x][u]) sets[locs[x]].push_back(comps[u]);
    }
  }
  return Instance::from_ids(locs, levels, sets);
}

}  // namespace netmon::testing
