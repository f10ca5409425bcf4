#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "windadm/lp/linear_program.hpp"
#include "windadm/lp/milp.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::testing {

// Dual objective of a bounded-variable LP rebuilt from the row duals alone:
// b'y + sum_j (c - A'y)_j * (bound x_j sits on), in the problem's own sense.
// Returns NaN if the reduced cost points toward an infinite bound.
inline double dual_objective(const lp::LinearProgram& p,
                             const std::vector<double>& y) {
  const int n = p.num_variables();
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = p.variable(j).objective;
  double value = p.objective_offset();
  for (int i = 0; i < p.num_constraints(); ++i) {
    const auto& row = p.constraint(i);
    value += row.rhs * y[i];
    for (const auto& t : row.terms) d[t.var] -= t.coef * y[i];
  }
  const bool minimize = p.sense() == lp::Sense::kMinimize;
  for (int j = 0; j < n; ++j) {
    const auto& v = p.variable(j);
    // For min: positive reduced cost pairs with the lower bound.
    const bool to_lower = minimize ? d[j] > 0 : d[j] < 0;
    if (std::abs(d[j]) < 1e-12) continue;
    const double b = to_lower ? v.lower : v.upper;
    if (!std::isfinite(b)) {
      if (std::abs(d[j]) > 1e-7) return std::nan("");
      continue;
    }
    value += d[j] * b;
  }
  return value;
}

// Largest violation of dual sign conditions: for min, y <= 0 on <= rows and
// y >= 0 on >= rows (reversed for max).
inline double dual_sign_violation(const lp::LinearProgram& p,
                                  const std::vector<double>& y) {
  const double s = p.sense() == lp::Sense::kMinimize ? 1.0 : -1.0;
  double worst = 0.0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    const double yi = s * y[i];
    switch (p.constraint(i).relation) {
      case lp::Relation::kLessEqual: worst = std::max(worst, yi); break;
      case lp::Relation::kGreaterEqual: worst = std::max(worst, -yi); break;
      case lp::Relation::kEqual: break;
    }
  }
  return worst;
}

// max_i |y_i * (a_i x - b_i)|
inline double complementary_slackness(const lp::LinearProgram& p,
                                      const std::vector<double>& x,
                                      const std::vector<double>& y) {
  const auto act = p.row_activities(x);
  double worst = 0.0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    worst = std::max(worst, std::abs(y[i] * (act[i] - p.constraint(i).rhs)));
  }
  return worst;
}

// Random LP that is feasible by construction (rows are built around an
// interior point). A few variables are free or one-sided; all are kept from
// being unbounded by a box on the objective direction.
inline lp::LinearProgram random_feasible_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 9);
  lp::LinearProgram p(kind(rng) < 5 ? lp::Sense::kMinimize : lp::Sense::kMaximize);
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = 2.0 * u(rng);
    double lo = x0[j] - 1.0 - std::abs(u(rng)) * 3.0;
    double hi = x0[j] + 1.0 + std::abs(u(rng)) * 3.0;
    const int k = kind(rng);
    if (k == 0) lo = -lp::kInf;
    if (k == 1) hi = lp::kInf;
    if (k == 2) lo = hi = x0[j];
    p.add_variable(lo, hi, 5.0 * u(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (kind(rng) < 6) continue;
      const double c = std::round(10.0 * u(rng) * 100.0) / 100.0;
      if (c == 0.0) continue;
      terms.push_back({j, c});
      act += c * x0[j];
    }
    const int k = kind(rng);
    if (k < 4) {
      p.add_constraint(std::move(terms), lp::Relation::kLessEqual,
                       act + std::abs(u(rng)));
    } else if (k < 8) {
      p.add_constraint(std::move(terms), lp::Relation::kGreaterEqual,
                       act - std::abs(u(rng)));
    } else {
      p.add_constraint(std::move(terms), lp::Relation::kEqual, act);
    }
  }
  // Keep every variable with an infinite side bounded through a row.
  std::vector<lp::Term> box;
  for (int j = 0; j < n; ++j) {
    const auto& v = p.variable(j);
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      p.add_constraint({{j, 1.0}}, lp::Relation::kLessEqual, x0[j] + 10.0);
      p.add_constraint({{j, 1.0}}, lp::Relation::kGreaterEqual, x0[j] - 10.0);
    }
  }
  return p;
}

// Random MILP with `nb` binaries and a few bounded continuous variables.
inline lp::MilpProblem random_milp(std::mt19937_64& rng, int nb, int nc, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 2);
  lp::MilpProblem milp;
  milp.lp().set_sense(coin(rng) == 0 ? lp::Sense::kMinimize : lp::Sense::kMaximize);
  for (int j = 0; j < nb; ++j) milp.add_binary(std::round(20.0 * u(rng)));
  for (int j = 0; j < nc; ++j) {
    milp.add_variable(0.0, 2.0 + 3.0 * std::abs(u(rng)), std::round(10.0 * u(rng)));
  }
  const int n = nb + nc;
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    double pos = 0.0;
    for (int j = 0; j < n; ++j) {
      if (coin(rng) == 0) continue;
      const double c = std::round(10.0 * u(rng));
      if (c == 0.0) continue;
      terms.push_back({j, c});
      if (c > 0) pos += c;
    }
    const double rhs = std::round(pos * (0.2 + 0.5 * std::abs(u(rng))));
    milp.lp().add_constraint(std::move(terms), lp::Relation::kLessEqual, rhs);
  }
  return milp;
}

struct EnumerationResult {
  bool feasible = false;
  double objective = 0.0;
};

// Exhaustive enumeration over every 0/1 assignment of the integer variables;
// the continuous remainder (if any) is solved as an LP with those fixed.
inline EnumerationResult enumerate_milp(const lp::MilpProblem& milp) {
  lp::LinearProgram work = milp.lp();
  std::vector<int> ints;
  for (int j = 0; j < work.num_variables(); ++j) {
    if (milp.is_integer(j)) ints.push_back(j);
  }
  const bool pure = static_cast<int>(ints.size()) == work.num_variables();
  const bool maximize = work.sense() == lp::Sense::kMaximize;
  EnumerationResult best;
  const std::uint64_t count = std::uint64_t{1} << ints.size();
  std::vector<double> x(work.num_variables(), 0.0);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t i = 0; i < ints.size(); ++i) {
      const double v = static_cast<double>((mask >> i) & 1U);
      x[ints[i]] = v;
      work.set_bounds(ints[i], v, v);
    }
    double value = 0.0;
    if (pure) {
      if (work.max_violation(x) > 1e-9) continue;
      value = work.evaluate_objective(x);
    } else {
      const auto sol = lp::solve_lp(work);
      if (sol.status != lp::LpStatus::kOptimal) continue;
      value = sol.objective;
    }
    if (!best.feasible || (maximize ? value > best.objective : value < best.objective)) {
      best.feasible = true;
      best.objective = value;
    }
  }
  return best;
}

}  // namespace windadm::testing
