#pragma once

#include <string>
#include <utility>
#include <vector>

#include "windadm/grid/network.hpp"
#include "windadm/lp/linear_program.hpp"

namespace windadm::grid {

// Column layout of the dispatch problem, period-major within each block:
// p[g][t], theta[n][t], curtailment dw[m][t], shedding dD[j][t].
struct RecourseIndex {
  int generators = 0;
  int nodes = 0;
  int farms = 0;
  int loads = 0;
  int horizon = 0;

  explicit RecourseIndex(const Network& net)
      : generators(net.num_generators()), nodes(net.nodes), farms(net.num_farms()),
        loads(net.num_loads()), horizon(net.horizon) {}

  int p(int g, int t) const { return g * horizon + t; }
  int theta(int n, int t) const { return (generators + n) * horizon + t; }
  int dw(int m, int t) const { return (generators + nodes + m) * horizon + t; }
  int dd(int j, int t) const { return (generators + nodes + farms + j) * horizon + t; }
  int num_vars() const { return (generators + nodes + farms + loads) * horizon; }
};

// Closed-form size of assemble_recourse_lp:
//   columns = (G + N + M + J) T
//   rows    = 2GT capacity + 2G(T-1) ramp + 2LT flow + T reference + NT balance
// Angle limits, shedding and curtailment limits are column bounds.
struct RecourseTally {
  int columns = 0;
  int rows = 0;
};
RecourseTally recourse_tally(const Network& net);

// Dispatch LP for a fixed wind realization: minimize weighted curtailment and
// shedding subject to capacity, ramping (periods 1..T-1 only), DC line flow,
// angle limits, reference angle and nodal balance.
lp::LinearProgram assemble_recourse_lp(const Network& net, const UcSchedule& uc,
                                       const PriceSchedule& prices,
                                       const WindSeries& wind);

struct RecourseSolution {
  std::vector<std::vector<double>> p;      // [G][T] MW
  std::vector<std::vector<double>> theta;  // [N][T] rad
  std::vector<std::vector<double>> dw;     // [M][T] MW curtailed
  std::vector<std::vector<double>> dd;     // [J][T] MW shed
  double objective = 0.0;                  // $
};

// Solves the dispatch LP. The problem is always feasible (shed everything,
// curtail everything); an infeasible or unbounded solver status raises
// kNumericBreakdown.
RecourseSolution evaluate_scenario(const Network& net, const UcSchedule& uc,
                                   const PriceSchedule& prices, const WindSeries& wind);

// Largest |nodal balance residual| (MW) of a dispatch for a given wind series.
double balance_residual(const Network& net, const WindSeries& wind,
                        const RecourseSolution& sol);

// Index of the deviation indicator for farm m, period t: the upper indicator
// first, then the lower one.
inline int wind_binary(int m, int t, bool upper, int horizon) {
  return 2 * (m * horizon + t) + (upper ? 0 : 1);
}

// The dispatch problem with wind moved to the right-hand side:
//
//   a_i' x + sum_y P_iy (w o v)_y + sum_y X_iy v_y  (<= or ==)  r_i
//
// where (w o v)_y is the boundary value attached to indicator y times v_y.
// Generation, curtailment and shedding columns are implicitly >= 0; angle
// columns are free. Nodal balance and the reference angle stay equalities;
// splitting them would give the dual a ray along which both halves drift.
struct CompactRow {
  std::vector<lp::Term> a;
  double r = 0.0;
  std::vector<std::pair<int, double>> p;  // (indicator, coefficient)
  std::vector<std::pair<int, double>> x;
  std::string name;
  bool equality = false;
};

struct CompactRecourse {
  int num_vars = 0;
  int num_binaries = 0;
  std::vector<double> cost;
  std::vector<bool> nonneg;
  std::vector<CompactRow> rows;

  // Right-hand side of row i once indicators and boundary are fixed.
  // `wv[y]` is the boundary value for indicator y, `v[y]` its 0/1 state.
  double rhs(int i, const std::vector<double>& wv, const std::vector<double>& v) const;
  // The dispatch LP at (boundary, vertex); row order matches `rows`, so the
  // row duals of the minimization are the multipliers (<= 0 on inequality
  // rows, free on equalities).
  lp::LinearProgram instantiate(const std::vector<double>& wv,
                                const std::vector<double>& v) const;
};

CompactRecourse build_compact_recourse(const Network& net, const UcSchedule& uc,
                                       const PriceSchedule& prices);

}  // namespace windadm::grid
