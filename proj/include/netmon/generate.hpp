#pragma once

// Synthetic instance generators. All randomness comes from Rng, a 64-bit
// Mersenne Twister (std::mt19937_64, whose output sequence is fixed by the C++
// standard) with hand-written reductions, so a seed reproduces the same
// instance on every platform and standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "netmon/errors.hpp"
#include "netmon/instance.hpp"

namespace netmon {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n - 1}; rejection sampling avoids modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw InputError("Rng::below needs n >= 1");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr double kLevelScale[] = {0.2, 0.4, 0.6, 0.8};

/// Step function from a security index to a security level; an infinite
/// index means the component cannot be attacked at all (level 1).
inline double security_level_from_index(double delta) {
  if (std::isnan(delta) || delta <= 0.0) {
    throw InputError("security index must be positive");
  }
  if (std::isinf(delta)) return 1.0;
  if (delta <= 5.0) return 0.2;
  if (delta <= 15.0) return 0.4;
  if (delta <= 20.0) return 0.6;
  return 0.8;
}

/// Builds an instance from security indices instead of levels. Components
/// with an infinite index cannot be attacked and are left out, along with
/// their entries in the monitoring sets.
inline Instance from_security_indices(
    std::vector<std::string> locations,
    const std::vector<std::pair<std::string, double>>& indices,
    const std::map<std::string, std::vector<std::string>>& monitoring_sets, int budget = 1) {
  std::vector<std::pair<std::string, double>> kept;
  std::set<std::string> dropped;
  for (const auto& [id, delta] : indices) {
    const double level = security_level_from_index(delta);
    if (level >= 1.0) {
      dropped.insert(id);
    } else {
      kept.push_back({id, level});
    }
  }
  std::map<std::string, std::vector<std::string>> sets;
  for (const auto& [loc, members] : monitoring_sets) {
    auto& out = sets[loc];
    for (const auto& c : members) {
      if (!dropped.count(c)) out.push_back(c);
    }
  }
  return Instance::from_ids(std::move(locations), kept, sets, budget);
}

enum class InstanceKind { random, disjoint, homogeneous, grid };

inline InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "random") return InstanceKind::random;
  if (s == "disjoint") return InstanceKind::disjoint;
  if (s == "homogeneous") return InstanceKind::homogeneous;
  if (s == "grid") return InstanceKind::grid;
  throw InputError("unknown instance kind '" + s + "'");
}

struct GenerateParams {
  int locations = 8;
  int components = 12;
  double density = 0.3;        // random, homogeneous: membership probability
  int per_location = 2;        // disjoint: components per location
  double level = 0.4;          // homogeneous: the shared level
  int rows = 6, cols = 10;     // grid
  double keep = 0.8;           // grid: probability an edge is present
  int budget = 1;
};

namespace detail {

inline std::string padded_id(char prefix, std::size_t i, std::size_t count) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  return std::string(1, prefix) + std::string(width - digits.size(), '0') + digits;
}

inline Instance assemble(std::size_t nx, const std::vector<double>& levels,
                         const std::vector<std::vector<std::size_t>>& sets, int budget,
                         char loc_prefix = 'x', char comp_prefix = 'u') {
  std::vector<std::string> loc_ids, comp_ids;
  for (std::size_t x = 0; x < nx; ++x) loc_ids.push_back(padded_id(loc_prefix, x, nx));
  std::vector<std::pair<std::string, double>> comps;
  for (std::size_t u = 0; u < levels.size(); ++u) {
    comp_ids.push_back(padded_id(comp_prefix, u, levels.size()));
    comps.push_back({comp_ids.back(), levels[u]});
  }
  std::map<std::string, std::vector<std::string>> named;
  for (std::size_t x = 0; x < nx; ++x) {
    auto& out = named[loc_ids[x]];
    for (std::size_t u : sets[x]) out.push_back(comp_ids[u]);
  }
  return Instance::from_ids(loc_ids, comps, named, budget);
}

inline void check_counts(const GenerateParams& p) {
  if (p.budget < 1) throw InputError("budget must be >= 1");
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw InputError("density must lie in [0,1]");
  if (!(p.keep >= 0.0 && p.keep <= 1.0)) throw InputError("keep probability must lie in [0,1]");
}

inline std::vector<std::vector<std::size_t>> random_sets(Rng& rng, std::size_t nx,
                                                         std::size_t nu, double density) {
  std::vector<std::vector<char>> in(nx, std::vector<char>(nu, 0));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < nu; ++u) in[x][u] = rng.uniform() < density;
  }
  for (std::size_t u = 0; u < nu; ++u) {
    bool covered = false;
    for (std::size_t x = 0; x < nx; ++x) covered = covered || in[x][u];
    if (!covered) in[rng.below(nx)][u] = 1;
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (std::none_of(in[x].begin(), in[x].end(), [](char c) { return c != 0; })) {
      in[x][rng.below(nu)] = 1;
    }
  }
  std::vector<std::vector<std::size_t>> sets(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < nu; ++u) {
      if (in[x][u]) sets[x].push_back(u);
    }
  }
  return sets;
}

}  // namespace detail

/// Random membership with levels drawn uniformly from the four-level scale.
inline Instance generate_random(const GenerateParams& p, std::uint64_t seed) {
  detail::check_counts(p);
  if (p.locations < 1 || p.components < 1) throw InputError("counts must be >= 1");
  Rng rng(seed);
  std::vector<double> levels(static_cast<std::size_t>(p.components));
  for (auto& l : levels) l = kLevelScale[rng.below(4)];
  const auto sets = detail::random_sets(rng, p.locations, p.components, p.density);
  return detail::assemble(p.locations, levels, sets, p.budget);
}

/// Every location owns `per_location` private components.
inline Instance generate_disjoint(const GenerateParams& p, std::uint64_t seed) {
  detail::check_counts(p);
  if (p.locations < 1 || p.per_location < 1) throw InputError("counts must be >= 1");
  Rng rng(seed);
  const std::size_t nu = static_cast<std::size_t>(p.locations) * p.per_location;
  std::vector<double> levels(nu);
  for (auto& l : levels) l = kLevelScale[rng.below(4)];
  std::vector<std::vector<std::size_t>> sets(p.locations);
  for (std::size_t u = 0; u < nu; ++u) sets[u / p.per_location].push_back(u);
  return detail::assemble(p.locations, levels, sets, p.budget);
}

/// Random membership, one shared security level.
inline Instance generate_homogeneous(const GenerateParams& p, std::uint64_t seed) {
  detail::check_counts(p);
  if (p.locations < 1 || p.components < 1) throw InputError("counts must be >= 1");
  if (!(p.level >= 0.0 && p.level < 1.0)) throw InputError("level must lie in [0,1)");
  Rng rng(seed);
  const auto sets = detail::random_sets(rng, p.locations, p.components, p.density);
  return detail::assemble(p.locations,
                          std::vector<double>(static_cast<std::size_t>(p.components), p.level),
                          sets, p.budget);
}

/// rows x cols lattice: nodes are locations, kept edges are components and a
/// node monitors its incident edges. A node left without edges gets its first
/// lattice edge back.
inline Instance generate_grid(const GenerateParams& p, std::uint64_t seed) {
  detail::check_counts(p);
  if (p.rows < 1 || p.cols < 1 || p.rows * p.cols < 2) {
    throw InputError("grid needs at least two nodes");
  }
  Rng rng(seed);
  const std::size_t rows = p.rows, cols = p.cols, nx = rows * cols;
  struct Edge {
    std::size_t a, b;
  };
  std::vector<Edge> lattice;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t v = i * cols + j;
      if (j + 1 < cols) lattice.push_back({v, v + 1});
      if (i + 1 < rows) lattice.push_back({v, v + cols});
    }
  }
  std::vector<char> keep(lattice.size());
  for (auto& k : keep) k = rng.uniform() < p.keep;
  std::vector<int> degree(nx, 0);
  for (std::size_t e = 0; e < lattice.size(); ++e) {
    if (keep[e]) ++degree[lattice[e].a], ++degree[lattice[e].b];
  }
  for (std::size_t v = 0; v < nx; ++v) {
    if (degree[v] > 0) continue;
    for (std::size_t e = 0; e < lattice.size(); ++e) {
      if (lattice[e].a == v || lattice[e].b == v) {
        keep[e] = 1;
        ++degree[lattice[e].a], ++degree[lattice[e].b];
        break;
      }
    }
  }
  std::vector<double> levels;
  std::vector<std::vector<std::size_t>> sets(nx);
  for (std::size_t e = 0; e < lattice.size(); ++e) {
    if (!keep[e]) continue;
    const std::size_t u = levels.size();
    levels.push_back(kLevelScale[rng.below(4)]);
    sets[lattice[e].a].push_back(u);
    sets[lattice[e].b].push_back(u);
  }
  return detail::assemble(nx, levels, sets, p.budget, 'n', 'e');
}

inline Instance generate(InstanceKind kind, const GenerateParams& p, std::uint64_t seed) {
  switch (kind) {
    case InstanceKind::random: return generate_random(p, seed);
    case InstanceKind::disjoint: return generate_disjoint(p, seed);
    case InstanceKind::homogeneous: return generate_homogeneous(p, seed);
    case InstanceKind::grid: return generate_grid(p, seed);
  }
  throw InputError("unknown instance kind");
}

}  // namespace netmon
