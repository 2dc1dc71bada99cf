#pragma once

// Multiplicative weights: the attacker's distribution is updated against the
// operator's best responses, and the operator plays the uniform mixture of
// those responses.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "netmon/coverage.hpp"
#include "netmon/errors.hpp"
#include "netmon/instance.hpp"

namespace netmon {

/// (1 + sqrt(2 ln|U| / N))^-1. Takes a real count so |U| = e works.
inline double eta(double num_components, std::size_t n) {
  if (!(num_components >= 1.0)) throw InputError("eta needs at least one component");
  if (n < 1) throw InputError("eta needs N >= 1");
  return 1.0 / (1.0 + std::sqrt(2.0 * std::log(num_components) / static_cast<double>(n)));
}

/// 4 ceil(ln|U| / eps^2).
inline std::size_t iterations_for_gap(double num_components, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(num_components >= 1.0)) throw InputError("need at least one component");
  const double q = std::log(num_components) / (epsilon * epsilon);
  // Absorb rounding noise so exact integers such as ln(e)/1 do not round up.
  return 4 * static_cast<std::size_t>(std::ceil(q - 1e-12 * std::max(1.0, q)));
}

/// sqrt(2 ln|U| / N) + ln|U| / N: how far below the game value the averaged
/// strategy may fall when every best response is exact.
inline double mwu_slack(double num_components, std::size_t n) {
  const double l = std::log(num_components), nn = static_cast<double>(n);
  return std::sqrt(2.0 * l / nn) + l / nn;
}

enum class ResponseMode { exact, greedy };

inline ResponseMode parse_response_mode(const std::string& s) {
  if (s == "exact") return ResponseMode::exact;
  if (s == "greedy") return ResponseMode::greedy;
  throw InputError("unknown best-response mode '" + s + "'");
}

inline const char* to_string(ResponseMode m) {
  return m == ResponseMode::exact ? "exact" : "greedy";
}

/// Placement of size r maximizing E_{u ~ attacker}[f(X, u)] (exact) or the
/// greedy max-marginal-gain placement.
inline Placement best_response(const Instance& inst, int r, const AttackerStrategy& attacker,
                               ResponseMode mode) {
  require_valid(inst);
  check_attacker(inst, attacker);
  if (mode == ResponseMode::greedy) return greedy_placement(inst, r, attacker.weights);
  std::vector<double> w = attacker.weights;
  for (auto& x : w) x = std::max(0.0, x);
  return best_coverage(inst, r, w, 0.0).placement;
}

struct MwuIteration {
  Placement response;
  /// Expected post-security of the response under that round's attacker.
  double payoff = 0.0;
};

struct MwuResult {
  MixedStrategy strategy;
  double achieved = 0.0;
  double eta = 0.0;
  std::size_t iterations = 0;
  ResponseMode mode = ResponseMode::exact;
  std::size_t num_components = 0;
  std::vector<MwuIteration> log;

  double slack() const { return mwu_slack(static_cast<double>(num_components), iterations); }

  /// Lower bound on `achieved` implied by a reference game value.
  double guarantee(double reference_value) const { return reference_value - slack(); }
};

inline MwuResult solve_mwu(const Instance& inst, int r, std::size_t n, ResponseMode mode) {
  require_valid(inst);
  const std::size_t m = inst.num_components();
  if (m < 2) throw PreconditionError("multiplicative weights needs at least two components");
  if (n < 1) throw InputError("iteration count must be >= 1");
  MwuResult out;
  out.mode = mode;
  out.iterations = n;
  out.num_components = m;
  out.eta = eta(static_cast<double>(m), n);
  const double log_eta = std::log(out.eta);
  std::vector<double> log_w(m, 0.0);
  AttackerStrategy attacker = AttackerStrategy::uniform(m);
  std::map<Placement, std::size_t> counts;
  out.log.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto x = best_response(inst, r, attacker, mode);
    const auto covered = covered_components(inst, x);
    double payoff = 0.0;
    for (ComponentIndex u = 0; u < m; ++u) {
      const double f = covered[u] ? 1.0 : inst.security_level(u);
      payoff += attacker.weights[u] * f;
      log_w[u] += f * log_eta;
    }
    const double top = *std::max_element(log_w.begin(), log_w.end());
    double total = 0.0;
    for (ComponentIndex u = 0; u < m; ++u) total += attacker.weights[u] = std::exp(log_w[u] - top);
    for (auto& w : attacker.weights) w /= total;
    ++counts[x];
    out.log.push_back({std::move(x), payoff});
  }
  std::vector<Atom> atoms;
  for (const auto& [p, c] : counts) {
    atoms.push_back({p, static_cast<double>(c) / static_cast<double>(n)});
  }
  out.strategy = MixedStrategy(std::move(atoms));
  out.achieved = evaluate_strategy(inst, out.strategy).value;
  return out;
}

inline MwuResult solve_mwu_for_gap(const Instance& inst, int r, double epsilon, ResponseMode mode) {
  return solve_mwu(inst, r, iterations_for_gap(static_cast<double>(inst.num_components()), epsilon),
                   mode);
}

}  // namespace netmon
