#pragma once

// Networked-system model: locations, components, monitoring sets, security
// levels and sensor budget, plus the derived quantities every solver uses.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netmon/errors.hpp"

namespace netmon {

/// Absolute tolerance for real comparisons throughout the library.
inline constexpr double kTolerance = 1e-9;

using LocationIndex = std::size_t;
using ComponentIndex = std::size_t;

class Instance {
 public:
  Instance() = default;

  /// Index-based constructor. Structural problems (duplicate identifiers,
  /// out-of-range indices, mismatched sizes) throw InputError; modelling
  /// assumptions are left to validate().
  Instance(std::vector<std::string> locations,
           std::vector<std::string> components,
           std::vector<double> security_levels,
           std::vector<std::vector<ComponentIndex>> monitoring_sets,
           int budget = 1)
      : locations_(std::move(locations)),
        components_(std::move(components)),
        levels_(std::move(security_levels)),
        sets_(std::move(monitoring_sets)),
        budget_(budget) {
    if (levels_.size() != components_.size()) {
      throw InputError("security level count " + std::to_string(levels_.size()) +
                       " does not match component count " +
                       std::to_string(components_.size()));
    }
    if (sets_.size() != locations_.size()) {
      throw InputError("monitoring set count does not match location count");
    }
    index_ids(locations_, location_lookup_, "location");
    index_ids(components_, component_lookup_, "component");
    covering_.assign(components_.size(), {});
    for (LocationIndex x = 0; x < sets_.size(); ++x) {
      auto& set = sets_[x];
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      for (ComponentIndex u : set) {
        if (u >= components_.size()) {
          throw InputError("monitoring set of '" + locations_[x] +
                           "' references component index " + std::to_string(u));
        }
        covering_[u].push_back(x);
      }
    }
  }

  /// Identifier-based constructor used by the file loader and tests.
  static Instance from_ids(
      std::vector<std::string> locations,
      const std::vector<std::pair<std::string, double>>& components,
      const std::map<std::string, std::vector<std::string>>& monitoring_sets,
      int budget = 1) {
    std::vector<std::string> component_ids;
    std::vector<double> levels;
    std::unordered_map<std::string, ComponentIndex> lookup;
    for (const auto& [id, level] : components) {
      lookup.emplace(id, component_ids.size());
      component_ids.push_back(id);
      levels.push_back(level);
    }
    std::unordered_map<std::string, LocationIndex> location_lookup;
    for (std::size_t i = 0; i < locations.size(); ++i) {
      location_lookup.emplace(locations[i], i);
    }
    std::vector<std::vector<ComponentIndex>> sets(locations.size());
    for (const auto& [loc, members] : monitoring_sets) {
      auto it = location_lookup.find(loc);
      if (it == location_lookup.end()) {
        throw InputError("monitoring set given for unknown location '" + loc + "'");
      }
      for (const auto& c : members) {
        auto jt = lookup.find(c);
        if (jt == lookup.end()) {
          throw InputError("monitoring set of '" + loc +
                           "' references unknown component '" + c + "'");
        }
        sets[it->second].push_back(jt->second);
      }
    }
    return Instance(std::move(locations), std::move(component_ids),
                    std::move(levels), std::move(sets), budget);
  }

  std::size_t num_locations() const { return locations_.size(); }
  std::size_t num_components() const { return components_.size(); }
  int budget() const { return budget_; }

  const std::string& location_id(LocationIndex x) const {
    check_location(x);
    return locations_[x];
  }
  const std::string& component_id(ComponentIndex u) const {
    check_component(u);
    return components_[u];
  }
  const std::vector<std::string>& location_ids() const { return locations_; }
  const std::vector<std::string>& component_ids() const { return components_; }

  LocationIndex location_index(std::string_view id) const {
    auto it = location_lookup_.find(std::string(id));
    if (it == location_lookup_.end()) {
      throw InputError("unknown location '" + std::string(id) + "'");
    }
    return it->second;
  }
  ComponentIndex component_index(std::string_view id) const {
    auto it = component_lookup_.find(std::string(id));
    if (it == component_lookup_.end()) {
      throw InputError("unknown component '" + std::string(id) + "'");
    }
    return it->second;
  }

  double security_level(ComponentIndex u) const {
    check_component(u);
    return levels_[u];
  }
  const std::vector<double>& security_levels() const { return levels_; }

  /// Components secured by a sensor at x, sorted by index.
  std::span<const ComponentIndex> monitoring_set(LocationIndex x) const {
    check_location(x);
    return sets_[x];
  }
  /// Locations whose monitoring set contains u, sorted by index.
  std::span<const LocationIndex> covering_locations(ComponentIndex u) const {
    check_component(u);
    return covering_[u];
  }

  Instance with_budget(int budget) const {
    Instance copy = *this;
    copy.budget_ = budget;
    return copy;
  }

  void check_location(LocationIndex x) const {
    if (x >= locations_.size()) {
      throw InputError("location index " + std::to_string(x) + " out of range");
    }
  }
  void check_component(ComponentIndex u) const {
    if (u >= components_.size()) {
      throw InputError("component index " + std::to_string(u) + " out of range");
    }
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.locations_ == b.locations_ && a.components_ == b.components_ &&
           a.levels_ == b.levels_ && a.sets_ == b.sets_ && a.budget_ == b.budget_;
  }

 private:
  template <class Map>
  static void index_ids(const std::vector<std::string>& ids, Map& lookup,
                        const char* kind) {
    lookup.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!lookup.emplace(ids[i], i).second) {
        throw InputError(std::string("duplicate ") + kind + " id '" + ids[i] + "'");
      }
    }
  }

  std::vector<std::string> locations_;
  std::vector<std::string> components_;
  std::vector<double> levels_;
  std::vector<std::vector<ComponentIndex>> sets_;
  std::vector<std::vector<LocationIndex>> covering_;
  std::unordered_map<std::string, LocationIndex> location_lookup_;
  std::unordered_map<std::string, ComponentIndex> component_lookup_;
  int budget_ = 1;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string message;
  std::vector<std::string> ids;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const Instance& inst) {
  ValidationReport report;
  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    if (inst.monitoring_set(x).empty()) {
      report.violations.push_back({"empty monitoring set", {inst.location_id(x)}});
    }
  }
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    const std::string& id = inst.component_id(u);
    if (inst.covering_locations(u).empty()) {
      report.violations.push_back({"unmonitored component", {id}});
    }
    const double level = inst.security_level(u);
    if (!std::isfinite(level) || level >= 1.0) {
      report.violations.push_back({"security level must be < 1", {id}});
    } else if (level < 0.0) {
      report.violations.push_back({"security level must be >= 0", {id}});
    }
  }
  if (inst.budget() < 1) {
    report.violations.push_back(
        {"budget must be >= 1", {std::to_string(inst.budget())}});
  }
  return report;
}

/// Throws InputError listing every violation.
inline void require_valid(const Instance& inst) {
  const auto report = validate(inst);
  if (report.ok()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : report.violations) {
    msg += " " + v.message;
    for (const auto& id : v.ids) msg += " [" + id + "]";
    msg += ";";
  }
  throw InputError(msg);
}

// ---------------------------------------------------------------------------
// Strategies

/// A set of sensor locations, kept sorted and duplicate-free.
class Placement {
 public:
  Placement() = default;
  explicit Placement(std::vector<LocationIndex> locations)
      : locations_(std::move(locations)) {
    std::sort(locations_.begin(), locations_.end());
    locations_.erase(std::unique(locations_.begin(), locations_.end()),
                     locations_.end());
  }
  Placement(std::initializer_list<LocationIndex> locations)
      : Placement(std::vector<LocationIndex>(locations)) {}

  std::span<const LocationIndex> locations() const { return locations_; }
  std::size_t size() const { return locations_.size(); }
  bool empty() const { return locations_.empty(); }
  bool contains(LocationIndex x) const {
    return std::binary_search(locations_.begin(), locations_.end(), x);
  }

  friend auto operator<=>(const Placement&, const Placement&) = default;
  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  std::vector<LocationIndex> locations_;
};

struct Atom {
  Placement placement;
  double probability = 0.0;
};

/// Probability distribution over placements. Atoms are merged by placement,
/// zero-mass atoms dropped, and the rest kept in placement order.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<Atom> atoms) {
    std::map<Placement, double> merged;
    for (auto& a : atoms) {
      if (!std::isfinite(a.probability) || a.probability < -kTolerance) {
        throw InputError("strategy probability must be finite and nonnegative");
      }
      merged[std::move(a.placement)] += a.probability;
    }
    double total = 0.0;
    for (const auto& [p, w] : merged) {
      if (w > 0.0) {
        atoms_.push_back({p, w});
        total += w;
      }
    }
    if (std::abs(total - 1.0) > kTolerance) {
      throw InputError("strategy probabilities sum to " + std::to_string(total));
    }
  }

  static MixedStrategy point_mass(Placement p) {
    return MixedStrategy({{std::move(p), 1.0}});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  friend bool operator==(const MixedStrategy& a, const MixedStrategy& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (a.atoms_[i].placement != b.atoms_[i].placement ||
          a.atoms_[i].probability != b.atoms_[i].probability) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Per-location probability of hosting a sensor.
struct MarginalVector {
  std::vector<double> values;

  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
  std::size_t support_size() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
  }
};

/// Attacker's distribution over components.
struct AttackerStrategy {
  std::vector<double> weights;

  static AttackerStrategy uniform(std::size_t n) {
    return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
  }
};

inline void check_placement(const Instance& inst, const Placement& p) {
  for (LocationIndex x : p.locations()) inst.check_location(x);
}

/// Checks location indices and, when budget > 0, that every atom fits.
inline void check_strategy(const Instance& inst, const MixedStrategy& s, int budget = 0) {
  for (const auto& a : s.atoms()) {
    check_placement(inst, a.placement);
    if (budget > 0 && a.placement.size() > static_cast<std::size_t>(budget)) {
      throw InputError("placement of size " + std::to_string(a.placement.size()) +
                       " exceeds budget " + std::to_string(budget));
    }
  }
}

inline void check_attacker(const Instance& inst, const AttackerStrategy& a) {
  if (a.weights.size() != inst.num_components()) {
    throw InputError("attacker strategy has wrong dimension");
  }
  double total = 0.0;
  for (double w : a.weights) {
    if (!std::isfinite(w) || w < -kTolerance) {
      throw InputError("attacker weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw InputError("attacker weights sum to " + std::to_string(total));
  }
}

// ---------------------------------------------------------------------------
// Derived quantities

/// Indicator vector of U_X for the placement X.
inline std::vector<char> covered_components(const Instance& inst, const Placement& p) {
  std::vector<char> covered(inst.num_components(), 0);
  for (LocationIndex x : p.locations()) {
    for (ComponentIndex u : inst.monitoring_set(x)) covered[u] = 1;
  }
  return covered;
}

/// f(X, u): 1 when u is monitored under X, its security level otherwise.
inline double post_security(const Instance& inst, const Placement& p, ComponentIndex u) {
  inst.check_component(u);
  for (LocationIndex x : p.locations()) {
    const auto set = inst.monitoring_set(x);
    if (std::binary_search(set.begin(), set.end(), u)) return 1.0;
  }
  return inst.security_level(u);
}

/// Lowest security level inside the monitoring set of x.
inline double location_criticality(const Instance& inst, LocationIndex x) {
  const auto set = inst.monitoring_set(x);
  if (set.empty()) {
    throw PreconditionError("location '" + inst.location_id(x) + "' has an empty monitoring set");
  }
  double lowest = 1.0;
  for (ComponentIndex u : set) lowest = std::min(lowest, inst.security_level(u));
  return lowest;
}

/// Sum over T of 1 / (1 - level).
inline double packing_weight_sum(const Instance& inst, std::span<const ComponentIndex> components) {
  double sum = 0.0;
  for (ComponentIndex u : components) sum += 1.0 / (1.0 - inst.security_level(u));
  return sum;
}

inline bool check_cover(const Instance& inst, std::span<const LocationIndex> locations) {
  std::vector<char> covered(inst.num_components(), 0);
  for (LocationIndex x : locations) {
    for (ComponentIndex u : inst.monitoring_set(x)) covered[u] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

inline bool check_packing(const Instance& inst, std::span<const ComponentIndex> components) {
  std::vector<int> hits(inst.num_locations(), 0);
  std::vector<ComponentIndex> sorted(components.begin(), components.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (ComponentIndex u : sorted) {
    for (LocationIndex x : inst.covering_locations(u)) {
      if (++hits[x] > 1) return false;
    }
  }
  return true;
}

/// Locations ordered by nondecreasing criticality value; ties by index.
inline std::vector<LocationIndex> sort_by_criticality(const Instance& inst,
                                                      std::span<const LocationIndex> locations) {
  std::vector<std::pair<double, LocationIndex>> keyed;
  keyed.reserve(locations.size());
  for (LocationIndex x : locations) keyed.emplace_back(location_criticality(inst, x), x);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.second == b.second; }),
              keyed.end());
  std::vector<LocationIndex> out;
  out.reserve(keyed.size());
  for (const auto& [_, x] : keyed) out.push_back(x);
  return out;
}

struct KStar {
  std::size_t count = 0;          // number of most critical locations monitored
  double weight_sum = 0.0;        // sum over them of 1 / (1 - criticality)
  double value = 0.0;             // equalized post-security level
  std::vector<LocationIndex> order;  // C sorted by criticality
};

/// Number of most critical locations of C that share the r sensors, and the
/// post-security level they are equalized to. Requires |C| > r.
inline KStar k_star(const Instance& inst, std::span<const LocationIndex> locations, int r) {
  KStar out;
  out.order = sort_by_criticality(inst, locations);
  if (r < 1 || out.order.size() <= static_cast<std::size_t>(r)) {
    throw PreconditionError("k_star needs more than r = " + std::to_string(r) +
                            " locations, got " + std::to_string(out.order.size()));
  }
  double running = 0.0;
  for (std::size_t k = 1; k <= out.order.size(); ++k) {
    const double crit = location_criticality(inst, out.order[k - 1]);
    running += 1.0 / (1.0 - crit);
    const double level = 1.0 - (static_cast<double>(k) - r) / running;
    if (crit <= level + kTolerance) {
      out.count = k;
      out.weight_sum = running;
      out.value = level;
    }
  }
  return out;
}

/// Marginals that equalize the k* most critical locations of C at the k_star
/// value. Zero outside those locations; sums to r.
inline MarginalVector optimal_marginals(const Instance& inst,
                                        std::span<const LocationIndex> locations, int r) {
  const KStar ks = k_star(inst, locations, r);
  MarginalVector rho{std::vector<double>(inst.num_locations(), 0.0)};
  const double excess = static_cast<double>(ks.count) - r;
  for (std::size_t l = 0; l < ks.count; ++l) {
    const LocationIndex x = ks.order[l];
    const double crit = location_criticality(inst, x);
    double v = 1.0 - excess / ((1.0 - crit) * ks.weight_sum);
    rho.values[x] = std::clamp(v, 0.0, 1.0);
  }
  return rho;
}

/// Expected post-security level of every component under the strategy.
inline std::vector<double> expected_levels(const Instance& inst, const MixedStrategy& s) {
  std::vector<double> levels(inst.num_components(), 0.0);
  for (const auto& atom : s.atoms()) {
    const auto covered = covered_components(inst, atom.placement);
    for (ComponentIndex u = 0; u < levels.size(); ++u) {
      levels[u] += atom.probability * (covered[u] ? 1.0 : inst.security_level(u));
    }
  }
  return levels;
}

struct StrategyValue {
  double value = 0.0;
  std::vector<ComponentIndex> worst_components;
};

/// Lowest expected post-security level, with every component attaining it.
inline StrategyValue evaluate_strategy(const Instance& inst, const MixedStrategy& s) {
  check_strategy(inst, s);
  const auto levels = expected_levels(inst, s);
  StrategyValue out;
  if (levels.empty()) {
    out.value = 1.0;
    return out;
  }
  out.value = *std::min_element(levels.begin(), levels.end());
  for (ComponentIndex u = 0; u < levels.size(); ++u) {
    if (levels[u] <= out.value + kTolerance) out.worst_components.push_back(u);
  }
  return out;
}

inline MarginalVector marginals_of(std::size_t num_locations, const MixedStrategy& s) {
  MarginalVector rho{std::vector<double>(num_locations, 0.0)};
  for (const auto& atom : s.atoms()) {
    for (LocationIndex x : atom.placement.locations()) {
      if (x >= num_locations) throw InputError("placement location out of range");
      rho.values[x] += atom.probability;
    }
  }
  return rho;
}

/// Locations monitored with positive probability.
inline std::vector<LocationIndex> node_basis(const MixedStrategy& s) {
  std::vector<LocationIndex> basis;
  for (const auto& atom : s.atoms()) {
    if (atom.probability <= 0.0) continue;
    basis.insert(basis.end(), atom.placement.locations().begin(),
                 atom.placement.locations().end());
  }
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  return basis;
}

/// Pairwise-disjoint monitoring sets.
inline bool has_disjoint_sets(const Instance& inst) {
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    if (inst.covering_locations(u).size() > 1) return false;
  }
  return true;
}

/// All components share one security level.
inline bool has_homogeneous_levels(const Instance& inst) {
  const auto& levels = inst.security_levels();
  return std::all_of(levels.begin(), levels.end(),
                     [&](double v) { return v == levels.front(); });
}

}  // namespace netmon
