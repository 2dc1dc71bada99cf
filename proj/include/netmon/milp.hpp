#pragma once

// Best-first branch-and-bound over binary variables, with LP relaxations
// solved by dense_lp. Nodes are ordered by relaxation bound (FIFO on ties) and
// branch on the most fractional binary (lowest index on ties), so the search
// is fully deterministic.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "netmon/dense_lp.hpp"
#include "netmon/errors.hpp"

namespace netmon {

struct MilpProblem {
  LpProblem lp;
  std::vector<std::size_t> binaries;
};

enum class MilpStatus { optimal, infeasible, node_limit, time_limit, unknown };

inline const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::node_limit: return "node_limit";
    case MilpStatus::time_limit: return "time_limit";
    case MilpStatus::unknown: return "unknown";
  }
  return "?";
}

struct MilpSolution {
  MilpStatus status = MilpStatus::unknown;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = 0.0;
  /// Proven bound on the optimum (upper bound when maximizing).
  double bound = 0.0;
  double gap = 0.0;
  std::size_t nodes = 0;
};

using Clock = std::chrono::steady_clock;

struct MilpOptions {
  double gap_tolerance = 1e-9;
  double integrality_tolerance = 1e-6;
  std::size_t node_limit = 1'000'000;
  std::optional<Clock::time_point> deadline;
  /// Optional known feasible point; ignored when it fails the feasibility check.
  std::vector<double> initial_incumbent;
};

namespace detail {

inline bool milp_point_feasible(const MilpProblem& p, const std::vector<double>& x,
                                double tol) {
  const auto& lp = p.lp;
  if (x.size() != lp.num_variables()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
  }
  for (std::size_t j : p.binaries) {
    if (std::abs(x[j] - std::round(x[j])) > tol) return false;
  }
  for (const auto& c : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < c.coefficients.size(); ++j) lhs += c.coefficients[j] * x[j];
    const double scale = tol * (1.0 + std::abs(c.rhs));
    if (c.relation == Relation::less_equal && lhs > c.rhs + scale) return false;
    if (c.relation == Relation::greater_equal && lhs < c.rhs - scale) return false;
    if (c.relation == Relation::equal && std::abs(lhs - c.rhs) > scale) return false;
  }
  return true;
}

struct BranchNode {
  double score;         // relaxation objective, oriented so larger is better
  std::uint64_t order;  // FIFO tie-break
  std::vector<std::int8_t> fixed;  // per binary: -1 free, 0, 1
  std::vector<double> x;
};

struct NodeOrder {
  bool operator()(const BranchNode& a, const BranchNode& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.order > b.order;
  }
};

}  // namespace detail

inline MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& options = {}) {
  const auto& base = problem.lp;
  const std::size_t n = base.num_variables();
  for (std::size_t j : problem.binaries) {
    if (j >= n) throw InputError("binary variable index out of range");
  }
  if (options.gap_tolerance < 0.0) throw InputError("gap tolerance must be nonnegative");
  const double orient = base.sense == Sense::maximize ? 1.0 : -1.0;
  const double int_tol = options.integrality_tolerance;

  LpProblem work = base;
  for (std::size_t j : problem.binaries) {
    work.lower[j] = std::max(work.lower[j], 0.0);
    work.upper[j] = std::min(work.upper[j], 1.0);
  }
  const std::vector<double> lower0 = work.lower, upper0 = work.upper;

  MilpSolution out;
  double best = -kInfinity;  // oriented incumbent score
  auto offer = [&](std::vector<double> x, double objective) {
    if (orient * objective > best) {
      best = orient * objective;
      for (std::size_t j : problem.binaries) x[j] = std::round(x[j]);
      out.x = std::move(x);
      out.objective = objective;
      out.has_incumbent = true;
    }
  };
  if (!options.initial_incumbent.empty() &&
      detail::milp_point_feasible(problem, options.initial_incumbent, int_tol)) {
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += base.objective[j] * options.initial_incumbent[j];
    offer(options.initial_incumbent, obj);
  }

  auto solve_node = [&](const std::vector<std::int8_t>& fixed) {
    work.lower = lower0;
    work.upper = upper0;
    for (std::size_t b = 0; b < fixed.size(); ++b) {
      if (fixed[b] < 0) continue;
      const std::size_t j = problem.binaries[b];
      work.lower[j] = work.upper[j] = static_cast<double>(fixed[b]);
    }
    ++out.nodes;
    return solve_lp(work);
  };
  // Most fractional binary, or npos when the point is integral.
  auto pick_branch = [&](const std::vector<double>& x) {
    std::size_t pick = problem.binaries.size();
    double best_frac = int_tol;
    for (std::size_t b = 0; b < problem.binaries.size(); ++b) {
      const double v = x[problem.binaries[b]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        pick = b;
      }
    }
    return pick;
  };
  auto prunable = [&](double score) { return score <= best + options.gap_tolerance; };

  std::priority_queue<detail::BranchNode, std::vector<detail::BranchNode>, detail::NodeOrder> open;
  std::uint64_t counter = 0;
  std::vector<std::int8_t> root_fix(problem.binaries.size(), -1);
  const LpSolution root = solve_node(root_fix);
  if (root.status == LpStatus::infeasible) {
    out.status = out.has_incumbent ? MilpStatus::optimal : MilpStatus::infeasible;
    out.bound = out.objective;
    return out;
  }
  if (root.status == LpStatus::unbounded) {
    throw InputError("MILP relaxation is unbounded");
  }
  double root_score = orient * root.objective;
  if (pick_branch(root.x) == problem.binaries.size()) {
    offer(root.x, root.objective);
  } else if (!prunable(root_score)) {
    open.push({root_score, counter++, root_fix, root.x});
  }

  MilpStatus stop = MilpStatus::optimal;
  while (!open.empty()) {
    if (prunable(open.top().score)) break;
    if (out.nodes >= options.node_limit) {
      stop = MilpStatus::node_limit;
      break;
    }
    if (options.deadline && Clock::now() > *options.deadline) {
      stop = MilpStatus::time_limit;
      break;
    }
    detail::BranchNode node = open.top();
    open.pop();
    const std::size_t b = pick_branch(node.x);
    for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
      auto fixed = node.fixed;
      fixed[b] = value;
      const LpSolution child = solve_node(fixed);
      if (child.status != LpStatus::optimal) continue;
      const double score = orient * child.objective;
      if (prunable(score)) continue;
      if (pick_branch(child.x) == problem.binaries.size()) {
        offer(child.x, child.objective);
      } else {
        open.push({score, counter++, std::move(fixed), child.x});
      }
    }
  }

  double open_bound = -kInfinity;
  if (stop != MilpStatus::optimal && !open.empty()) open_bound = open.top().score;
  const double bound_score = std::max(open_bound, best);
  out.bound = orient * bound_score;
  if (stop == MilpStatus::optimal) {
    if (!out.has_incumbent) {
      out.status = MilpStatus::infeasible;
      return out;
    }
    out.status = MilpStatus::optimal;
    // Best-first stops once the top open node cannot beat the incumbent by
    // more than the tolerance; report that bound honestly.
    if (!open.empty()) out.bound = orient * std::max(open.top().score, best);
  } else {
    out.status = out.has_incumbent ? stop : MilpStatus::unknown;
  }
  out.gap = out.has_incumbent ? std::abs(out.bound - out.objective) : kInfinity;
  return out;
}

inline MilpSolution solve_milp(const MilpProblem& problem, double gap_tolerance,
                               std::size_t node_limit) {
  MilpOptions opt;
  opt.gap_tolerance = gap_tolerance;
  opt.node_limit = node_limit;
  return solve_milp(problem, opt);
}

}  // namespace netmon
