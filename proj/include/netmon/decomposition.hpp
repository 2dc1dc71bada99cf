#pragma once

// Splits a marginal vector with integer sum r into a convex combination of
// size-r placements. Every step peels off one placement and leaves a residual
// with at least one more integral coordinate, so at most |supp| + 1 atoms are
// produced in O(n^2) total work.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "netmon/errors.hpp"
#include "netmon/instance.hpp"

namespace netmon {

struct DecompositionStep {
  Placement placement;
  double coefficient = 0.0;       // absolute mass given to the placement
  std::vector<double> residual;   // marginals left after the step
};

struct DecompositionTrace {
  std::vector<DecompositionStep> steps;
};

namespace detail {
inline constexpr double kSnap = 1e-10;
}

inline DecompositionTrace decompose_trace(const MarginalVector& marginals, int r) {
  const auto& in = marginals.values;
  const std::size_t n = in.size();
  if (r < 1) throw InputError("budget r must be >= 1");
  double total = 0.0;
  std::size_t positive = 0;
  for (double v : in) {
    if (!std::isfinite(v) || v < -kTolerance || v > 1.0 + kTolerance) {
      throw InputError("marginal " + std::to_string(v) + " lies outside [0,1]");
    }
    total += v;
    positive += v > 0.0;
  }
  if (std::abs(total - r) > kTolerance) {
    throw InputError("marginals sum to " + std::to_string(total) + ", expected " +
                     std::to_string(r));
  }
  if (positive < static_cast<std::size_t>(r)) {
    throw InputError("fewer than r locations carry positive marginal");
  }

  std::vector<double> rho(n);
  auto snap = [](double v) {
    if (v < detail::kSnap) return 0.0;
    if (v > 1.0 - detail::kSnap) return 1.0;
    return v;
  };
  for (std::size_t x = 0; x < n; ++x) rho[x] = snap(std::clamp(in[x], 0.0, 1.0));

  DecompositionTrace trace;
  double remaining = 1.0;
  std::vector<std::size_t> order(n);
  while (true) {
    if (trace.steps.size() > positive + 1) {
      throw InvariantError("decomposition failed to terminate");
    }
    std::vector<LocationIndex> chosen;
    std::vector<std::size_t> fractional;
    for (std::size_t x = 0; x < n; ++x) {
      if (rho[x] == 1.0) {
        chosen.push_back(x);
      } else if (rho[x] > 0.0) {
        fractional.push_back(x);
      }
    }
    if (chosen.size() > static_cast<std::size_t>(r) ||
        chosen.size() + fractional.size() < static_cast<std::size_t>(r)) {
      throw InvariantError("no feasible placement for residual marginals");
    }
    // Rounding drift leaves tiny fractional entries once the placement is forced.
    if (chosen.size() == static_cast<std::size_t>(r) ||
        chosen.size() + fractional.size() == static_cast<std::size_t>(r)) {
      if (chosen.size() < static_cast<std::size_t>(r)) {
        chosen.insert(chosen.end(), fractional.begin(), fractional.end());
      }
      trace.steps.push_back({Placement(chosen), remaining, std::vector<double>(n, 0.0)});
      break;
    }
    std::stable_sort(fractional.begin(), fractional.end(),
                     [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });
    const std::size_t need = static_cast<std::size_t>(r) - chosen.size();
    chosen.insert(chosen.end(), fractional.begin(), fractional.begin() + need);
    Placement placement(chosen);

    double lambda = 1.0;
    for (LocationIndex x : placement.locations()) lambda = std::min(lambda, rho[x]);
    for (std::size_t i = need; i < fractional.size(); ++i) {
      lambda = std::min(lambda, 1.0 - rho[fractional[i]]);
    }
    if (lambda >= 1.0 - detail::kSnap) {
      trace.steps.push_back({std::move(placement), remaining, std::vector<double>(n, 0.0)});
      break;
    }
    for (LocationIndex x : placement.locations()) rho[x] -= lambda;
    for (auto& v : rho) v = snap(v / (1.0 - lambda));
    trace.steps.push_back({std::move(placement), remaining * lambda, rho});
    remaining *= 1.0 - lambda;
  }
  return trace;
}

inline MixedStrategy decompose(const MarginalVector& marginals, int r) {
  const auto trace = decompose_trace(marginals, r);
  std::vector<Atom> atoms;
  double mass = 0.0;
  for (const auto& step : trace.steps) {
    if (step.coefficient < 1e-12) continue;
    atoms.push_back({step.placement, step.coefficient});
    mass += step.coefficient;
  }
  for (auto& a : atoms) a.probability /= mass;
  return MixedStrategy(std::move(atoms));
}

}  // namespace netmon
