#pragma once

// Dense two-phase bounded-variable primal simplex.
//
// The problems solved here are small (restricted masters, MILP relaxations,
// enumerated games), so everything lives in one dense tableau. Every row gets
// an artificial column; those columns carry B^-1 for the whole run, which is
// where the duals are read from at the end.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "netmon/errors.hpp"

namespace netmon {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { maximize, minimize };
enum class Relation { less_equal, equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct Constraint {
  std::vector<double> coefficients;  // missing trailing entries are zero
  Relation relation = Relation::less_equal;
  double rhs = 0.0;

  double coefficient(std::size_t j) const {
    return j < coefficients.size() ? coefficients[j] : 0.0;
  }
};

struct LpProblem {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Constraint> constraints;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  std::size_t add_variable(double cost, double lo = 0.0, double hi = kInfinity) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
  }

  /// Sparse convenience: terms are (variable, coefficient) pairs.
  std::size_t add_constraint(const std::vector<std::pair<std::size_t, double>>& terms,
                             Relation rel, double rhs) {
    Constraint c;
    c.relation = rel;
    c.rhs = rhs;
    for (const auto& [j, a] : terms) {
      if (j >= c.coefficients.size()) c.coefficients.resize(j + 1, 0.0);
      c.coefficients[j] += a;
    }
    constraints.push_back(std::move(c));
    return constraints.size() - 1;
  }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  /// Shadow price of each constraint: d(objective)/d(rhs) in the problem's
  /// own sense. For a maximization, <= rows have duals >= 0.
  std::vector<double> duals;
  double objective = 0.0;
  /// Objective recomputed from the duals and the final reduced costs.
  double dual_objective = 0.0;
  std::size_t iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-9;
  /// 0 selects 50 * (m + n) * max(m, n).
  std::size_t max_iterations = 0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), data_(rows * cols, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double* row(std::size_t i) { return data_.data() + i * n_; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> data_;
};

// Column of the internal standard form and how it maps back.
struct Column {
  std::size_t original = 0;  // original variable, or row for slacks
  double sign = 1.0;         // x_orig = offset + sign * x_internal
  double upper = kInfinity;  // internal bounds are [0, upper]
};

class SimplexSolver {
 public:
  SimplexSolver(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {}

  LpSolution run() {
    LpSolution sol;
    if (!build()) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    const std::size_t m = t_.rows();
    const std::size_t total = t_.cols();
    cap_ = opt_.max_iterations != 0
               ? opt_.max_iterations
               : 50 * (m + total) * std::max<std::size_t>(std::max(m, total), 1);

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(total, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[art_begin_ + i] = 1.0;
    set_costs(phase1);
    if (iterate(/*allow_artificial=*/false) == Outcome::unbounded) {
      throw SolverError("phase 1 reported unbounded", iterations_);
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] >= art_begin_) infeas += beta_[i];
    }
    if (infeas > feas_tol_) {
      sol.status = LpStatus::infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();

    // Phase 2.
    set_costs(cost_);
    bland_ = false;
    degenerate_ = 0;
    const Outcome out = iterate(false);
    sol.iterations = iterations_;
    if (out == Outcome::unbounded) {
      sol.status = LpStatus::unbounded;
      return sol;
    }
    extract(sol);
    sol.status = LpStatus::optimal;
    return sol;
  }

 private:
  enum class Outcome { optimal, unbounded };

  bool build() {
    const std::size_t n = p_.num_variables();
    if (p_.lower.size() != n || p_.upper.size() != n) {
      throw InputError("LP bound vectors do not match the objective length");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(p_.objective[j]) || std::isnan(p_.lower[j]) ||
          std::isnan(p_.upper[j])) {
        throw InputError("LP objective/bounds must be finite numbers");
      }
    }
    for (const auto& c : p_.constraints) {
      if (c.coefficients.size() > n) {
        throw InputError("LP constraint has " + std::to_string(c.coefficients.size()) +
                         " coefficients for " + std::to_string(n) + " variables");
      }
      if (!std::isfinite(c.rhs)) throw InputError("LP right-hand side must be finite");
      for (double a : c.coefficients) {
        if (!std::isfinite(a)) throw InputError("LP coefficients must be finite");
      }
    }
    const double sense = p_.sense == Sense::maximize ? -1.0 : 1.0;
    sense_ = sense;

    // Structural columns; fixed variables become constants.
    offset_.assign(n, 0.0);
    constant_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = p_.lower[j], hi = p_.upper[j];
      if (lo > hi + opt_.tolerance) return false;
      if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= opt_.tolerance) {
        offset_[j] = lo;
      } else if (std::isfinite(lo)) {
        offset_[j] = lo;
        cols_.push_back({j, 1.0, std::isfinite(hi) ? hi - lo : kInfinity});
      } else if (std::isfinite(hi)) {
        offset_[j] = hi;
        cols_.push_back({j, -1.0, kInfinity});
      } else {
        cols_.push_back({j, 1.0, kInfinity});
        cols_.push_back({j, -1.0, kInfinity});
      }
      constant_ += p_.objective[j] * offset_[j];
    }
    struct_count_ = cols_.size();

    const std::size_t m = p_.num_constraints();
    std::size_t slack_count = 0;
    for (const auto& c : p_.constraints) {
      if (c.relation != Relation::equal) ++slack_count;
    }
    slack_begin_ = struct_count_;
    art_begin_ = struct_count_ + slack_count;
    const std::size_t total = art_begin_ + m;

    t_ = Tableau(m, total);
    beta_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    row_sign_.assign(m, 1.0);
    upper_.assign(total, kInfinity);
    for (std::size_t k = 0; k < struct_count_; ++k) upper_[k] = cols_[k].upper;

    std::size_t slack = slack_begin_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = p_.constraints[i];
      double b = c.rhs;
      for (std::size_t j = 0; j < n; ++j) b -= c.coefficient(j) * offset_[j];
      for (std::size_t k = 0; k < struct_count_; ++k) {
        t_.at(i, k) = c.coefficient(cols_[k].original) * cols_[k].sign;
      }
      if (c.relation == Relation::less_equal) {
        t_.at(i, slack++) = 1.0;
      } else if (c.relation == Relation::greater_equal) {
        t_.at(i, slack++) = -1.0;
      }
      if (b < 0.0) {
        row_sign_[i] = -1.0;
        b = -b;
        double* row = t_.row(i);
        for (std::size_t k = 0; k < art_begin_; ++k) row[k] = -row[k];
      }
      t_.at(i, art_begin_ + i) = 1.0;
      rhs_[i] = b;
      beta_[i] = b;
    }

    cost_.assign(total, 0.0);
    for (std::size_t k = 0; k < struct_count_; ++k) {
      cost_[k] = sense * p_.objective[cols_[k].original] * cols_[k].sign;
    }
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) basis_[i] = art_begin_ + i;
    at_upper_.assign(total, 0);
    is_basic_.assign(total, 0);
    for (std::size_t i = 0; i < m; ++i) is_basic_[art_begin_ + i] = 1;

    double scale = 1.0;
    for (double b : rhs_) scale = std::max(scale, b);
    feas_tol_ = std::max(opt_.tolerance, 1e-9 * scale) * std::max<std::size_t>(1, m);
    feas_tol_ = std::min(feas_tol_, 1e-6);
    return true;
  }

  void set_costs(const std::vector<double>& c) {
    const std::size_t m = t_.rows();
    d_ = c;
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = t_.row(i);
      for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= cb * row[k];
    }
  }

  Outcome iterate(bool allow_artificial) {
    const std::size_t m = t_.rows();
    const std::size_t total = t_.cols();
    const std::size_t limit = allow_artificial ? total : art_begin_;
    const double tol = opt_.tolerance;
    const std::size_t degenerate_cap = 2 * (m + total);
    for (;;) {
      // Pricing.
      std::size_t enter = total;
      double best = 0.0;
      for (std::size_t k = 0; k < limit; ++k) {
        if (is_basic_[k]) continue;
        const double dk = d_[k];
        double score = 0.0;
        if (!at_upper_[k] && dk < -tol) {
          score = -dk;
        } else if (at_upper_[k] && dk > tol) {
          score = dk;
        } else {
          continue;
        }
        if (bland_) {
          enter = k;
          break;
        }
        if (score > best) {
          best = score;
          enter = k;
        }
      }
      if (enter == total) return Outcome::optimal;

      if (++iterations_ > cap_) {
        throw SolverError("simplex iteration cap exceeded after " +
                              std::to_string(iterations_ - 1) + " iterations",
                          iterations_ - 1);
      }

      const double dir = at_upper_[enter] ? -1.0 : 1.0;
      double step = upper_[enter];  // bound flip distance
      std::size_t leave = m;
      bool leave_to_upper = false;
      double leave_pivot = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double alpha = dir * t_.at(i, enter);
        double ratio;
        bool to_upper;
        if (alpha > tol) {
          ratio = std::max(beta_[i], 0.0) / alpha;
          to_upper = false;
        } else if (alpha < -tol && std::isfinite(upper_[basis_[i]])) {
          ratio = std::max(upper_[basis_[i]] - beta_[i], 0.0) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        bool take = false;
        if (leave == m) {
          take = ratio <= step;
        } else if (ratio < step - 1e-12) {
          take = true;
        } else if (ratio <= step + 1e-12) {
          take = bland_ ? basis_[i] < basis_[leave]
                        : std::abs(alpha) > std::abs(leave_pivot);
        }
        if (take) {
          step = std::min(step, ratio);
          leave = i;
          leave_to_upper = to_upper;
          leave_pivot = alpha;
        }
      }
      if (!std::isfinite(step)) return Outcome::unbounded;

      if (step <= tol) {
        if (++degenerate_ > degenerate_cap) bland_ = true;
      }

      // Move basics along the edge.
      if (step > 0.0) {
        for (std::size_t i = 0; i < m; ++i) beta_[i] -= dir * step * t_.at(i, enter);
      }
      if (leave == m) {
        at_upper_[enter] = at_upper_[enter] ? 0 : 1;
        continue;
      }
      const double enter_value = at_upper_[enter] ? upper_[enter] - step : step;
      const std::size_t out = basis_[leave];
      is_basic_[out] = 0;
      at_upper_[out] = leave_to_upper ? 1 : 0;
      pivot(leave, enter);
      basis_[leave] = enter;
      is_basic_[enter] = 1;
      at_upper_[enter] = 0;
      beta_[leave] = enter_value;
    }
  }

  void pivot(std::size_t r, std::size_t k) {
    const std::size_t m = t_.rows();
    const std::size_t total = t_.cols();
    double* prow = t_.row(r);
    const double inv = 1.0 / prow[k];
    for (std::size_t j = 0; j < total; ++j) prow[j] *= inv;
    prow[k] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      double* row = t_.row(i);
      const double f = row[k];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < total; ++j) row[j] -= f * prow[j];
      row[k] = 0.0;
    }
    const double f = d_[k];
    if (f != 0.0) {
      for (std::size_t j = 0; j < total; ++j) d_[j] -= f * prow[j];
      d_[k] = 0.0;
    }
  }

  void drive_out_artificials() {
    const std::size_t m = t_.rows();
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < art_begin_) continue;
      std::size_t best = art_begin_;
      double mag = 1e-9;
      for (std::size_t k = 0; k < art_begin_; ++k) {
        if (is_basic_[k]) continue;
        if (std::abs(t_.at(i, k)) > mag) {
          mag = std::abs(t_.at(i, k));
          best = k;
        }
      }
      if (best == art_begin_) continue;  // redundant row
      const std::size_t out = basis_[i];
      const double value = at_upper_[best] ? upper_[best] : 0.0;
      is_basic_[out] = 0;
      at_upper_[out] = 0;
      pivot(i, best);
      basis_[i] = best;
      is_basic_[best] = 1;
      at_upper_[best] = 0;
      // The artificial sat at zero, so the entering value is unchanged and
      // the other basics do not move.
      beta_[i] = value;
    }
  }

  void extract(LpSolution& sol) {
    const std::size_t m = t_.rows();
    const std::size_t total = t_.cols();
    std::vector<double> internal(total, 0.0);
    for (std::size_t k = 0; k < total; ++k) {
      if (!is_basic_[k] && at_upper_[k]) internal[k] = upper_[k];
    }
    for (std::size_t i = 0; i < m; ++i) internal[basis_[i]] = beta_[i];

    const std::size_t n = p_.num_variables();
    sol.x = offset_;
    for (std::size_t k = 0; k < struct_count_; ++k) {
      sol.x[cols_[k].original] += cols_[k].sign * internal[k];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(p_.lower[j])) sol.x[j] = std::max(sol.x[j], p_.lower[j]);
      if (std::isfinite(p_.upper[j])) sol.x[j] = std::min(sol.x[j], p_.upper[j]);
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += p_.objective[j] * sol.x[j];

    // y' = c_B B^-1 = -(reduced cost of the artificial column).
    sol.duals.assign(m, 0.0);
    double internal_dual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = -d_[art_begin_ + i];
      internal_dual += y * rhs_[i];
      sol.duals[i] = sense_ * y * row_sign_[i];
    }
    for (std::size_t k = 0; k < art_begin_; ++k) {
      if (!is_basic_[k] && at_upper_[k]) internal_dual += d_[k] * upper_[k];
    }
    sol.dual_objective = constant_ + sense_ * internal_dual;
  }

  const LpProblem& p_;
  LpOptions opt_;
  Tableau t_{0, 0};
  std::vector<Column> cols_;
  std::vector<double> offset_;
  double constant_ = 0.0;
  double sense_ = 1.0;
  std::size_t struct_count_ = 0, slack_begin_ = 0, art_begin_ = 0;
  std::vector<double> beta_, rhs_, row_sign_, upper_, cost_, d_;
  std::vector<std::size_t> basis_;
  std::vector<char> at_upper_, is_basic_;
  std::size_t iterations_ = 0, cap_ = 0, degenerate_ = 0;
  bool bland_ = false;
  double feas_tol_ = 1e-9;
};

}  // namespace detail

/// Solves the LP. Deterministic for identical input. Throws InputError on
/// malformed problems and SolverError when the iteration cap is hit.
inline LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {}) {
  detail::SimplexSolver solver(problem, options);
  return solver.run();
}

}  // namespace netmon
