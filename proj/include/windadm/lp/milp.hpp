#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "windadm/lp/linear_program.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::lp {

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit };

std::string_view to_string(MilpStatus status);

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = 0.0;  // incumbent objective, problem sense
  double bound = 0.0;      // best remaining relaxation bound, problem sense
  double gap = 0.0;        // |objective - bound|
  std::int64_t nodes = 0;  // LP relaxations solved
  std::int64_t lp_iterations = 0;
};

// Best-bound branch-and-bound. Branches on the most fractional integer
// variable (lowest index on ties); node ties are broken by creation order.
// Children restart the simplex from the parent's optimal basis.
//
// When `node_limit` is reached the incumbent (if any) is returned with
// status kNodeLimit and the remaining gap. Integer components of x are
// rounded exactly and the continuous part is re-solved with them fixed.
MilpResult solve_milp(const MilpProblem& milp, const Tolerances& tol = {},
                      std::int64_t node_limit = 1'000'000);

}  // namespace windadm::lp
