#pragma once

#include "windadm/grid/network.hpp"
#include "windadm/lp/milp.hpp"

namespace windadm::scuc {

struct ScucConfig {
  double reserve_rate = 0.05;  // fraction of total demand
  std::int64_t node_limit = 200'000;
  lp::Tolerances tolerances;
};

struct ScucResult {
  grid::UcSchedule uc;
  std::vector<std::vector<double>> p;  // [G][T] MW
  double cost = 0.0;                   // $
  std::int64_t nodes = 0;
};

// Deterministic unit commitment at the forecast wind: minimize generation
// cost with capacity, ramp, DC flow and balance rows (no curtailment, no
// shedding) plus a headroom row per period:
//
//   sum_g u_gt Pmax_g - sum_g p_gt >= r sum_j D_jt
//
// Throws kInfeasible when no commitment covers load and reserve,
// kIterationCap when the node limit stops the search without an incumbent.
ScucResult solve_scuc(const grid::Network& net, const ScucConfig& cfg = {});

// Largest violation (MW) of the reserve rows by a schedule and dispatch.
double reserve_shortfall(const grid::Network& net, const grid::UcSchedule& uc,
                         const std::vector<std::vector<double>>& p, double reserve_rate);

}  // namespace windadm::scuc
