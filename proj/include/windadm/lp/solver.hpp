#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "windadm/lp/linear_program.hpp"

namespace windadm::lp {

struct Tolerances {
  double feas_tol = 1e-7;      // primal bound / row violation
  double opt_tol = 1e-9;       // reduced-cost sign test
  double pivot_tol = 1e-9;     // smallest usable pivot element
  double duality_tol = 1e-6;   // relative primal-dual gap accepted at exit
  double int_tol = 1e-6;       // integrality test in branch-and-bound
  double opt_gap = 1e-6;       // absolute B&B gap
  int stall_threshold = 50;    // degenerate pivots before Bland's rule
  int refactor_interval = 64;  // eta-file length before refactorization
  std::int64_t max_iterations = 2'000'000;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(LpStatus status);

// Variable state at the final basis; used by branch-and-bound to restart a
// child node from its parent's basis.
enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct Basis {
  std::vector<BasisStatus> structural;  // one per variable
  std::vector<BasisStatus> logical;     // one per constraint
  bool empty() const { return structural.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;              // primal values per variable
  // d(objective)/d(rhs_i) in the problem's own sense. Nonzero only on
  // binding rows.
  std::vector<double> duals;
  // d(objective)/d(x_j) along the nonbasic direction, in the problem's sense.
  std::vector<double> reduced_costs;
  double objective = 0.0;
  std::int64_t iterations = 0;
  Basis basis;
};

// Bounded-variable primal simplex. Phase 1 minimizes the sum of bound
// infeasibilities of the basic variables starting from the all-logical basis;
// phase 2 uses Dantzig pricing with a Harris ratio test and switches to
// Bland's rule after `stall_threshold` consecutive degenerate pivots.
//
// Throws Error(kMalformedInput) for ill-formed input and
// Error(kNumericBreakdown) if the basis cannot be factorized after a restart
// from the logical basis.
LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol = {});

// Same as solve_lp but starts from `start` when it matches the problem shape.
// Only used internally by branch-and-bound.
LpSolution solve_lp_from(const LinearProgram& lp, const Basis& start,
                         const Tolerances& tol = {});

}  // namespace windadm::lp
