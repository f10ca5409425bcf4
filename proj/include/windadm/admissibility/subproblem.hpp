#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "windadm/grid/recourse.hpp"
#include "windadm/lp/milp.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::admissibility {

struct SubproblemConfig {
  // Bound on the multipliers of rows that carry wind; <= 0 picks
  // 10 x the largest curtailment or shedding price.
  double m_big = 0.0;
  std::int64_t node_limit = 200'000;
  lp::Tolerances tolerances{};
};

// One product gamma = lambda_row * v_indicator with its coefficient in
// the dual objective.
struct BilinearTerm {
  int row = 0;
  int indicator = 0;
  double d = 0.0;
  int var = 0;  // column of gamma in the MILP
};

// The worst-case search as a single-level MILP over (lambda, v, gamma):
//
//   max  sum_i lambda_i r_i - sum_(i,y) d_iy gamma_iy
//   s.t. A' lambda <= c  (== c on angle columns)
//        lambda <= 0 on inequality rows, free on equality rows
//        budget rows on v
//        -M v <= gamma <= 0,  -M (1 - v) <= lambda - gamma <= 0
//        (both envelopes symmetric about zero on equality rows)
//
// with d_iy = X_iy + P_iy w_y, so that at binary v the objective equals the
// dual of the dispatch LP at the realized wind.
struct CompiledSubproblem {
  grid::Network net;
  grid::CompactRecourse recourse;
  uncertainty::Boundary boundary;
  uncertainty::Budgets budgets;
  std::vector<double> wv;  // boundary value per indicator
  double m_big = 0.0;
  lp::MilpProblem milp;
  std::vector<int> lambda_var;  // per compact row
  std::vector<int> v_var;       // per indicator
  std::vector<BilinearTerm> terms;
};

CompiledSubproblem compile_subproblem(const grid::Network& net, const grid::UcSchedule& uc,
                                      const grid::PriceSchedule& prices,
                                      const uncertainty::Boundary& b,
                                      const uncertainty::Budgets& budgets,
                                      const SubproblemConfig& cfg = {});

struct SubproblemResult {
  uncertainty::Boundary boundary;  // the boundary this result was computed at
  uncertainty::Vertex vertex;
  std::vector<double> lambda;  // per compact row, from the clean LP at the vertex
  double objective = 0.0;      // F^R, the dispatch cost at the vertex
  double milp_objective = 0.0;
  double milp_gap = 0.0;
  bool proven_optimal = true;
  std::int64_t nodes = 0;
  double bilinear_error = 0.0;  // max |gamma - lambda v| in the MILP point
  grid::RecourseSolution dispatch;
  grid::WindSeries wind;  // realized at the vertex
};

// Throws kBigMTooSmall when a dispatch multiplier sits within 1% of the bound
// or the MILP value falls short of the dispatch cost at its own vertex.
SubproblemResult solve_subproblem(const CompiledSubproblem& cs,
                                  const SubproblemConfig& cfg = {});

// Solves the dispatch LP at one vertex through the compact form and returns
// the result with row multipliers.
SubproblemResult evaluate_vertex(const grid::CompactRecourse& cr, const grid::Network& net,
                                 const uncertainty::Boundary& b,
                                 const uncertainty::Vertex& v,
                                 const lp::Tolerances& tol = {});

// Exhaustive maximum over enumerate_vertices; the first vertex in
// lexicographic order wins ties.
SubproblemResult oracle_subproblem(const grid::Network& net, const grid::UcSchedule& uc,
                                   const grid::PriceSchedule& prices,
                                   const uncertainty::Boundary& b,
                                   const uncertainty::Budgets& budgets,
                                   std::uint64_t cap = uncertainty::kDefaultVertexCap);

inline constexpr double kVerdictTolerance = 1e-5;

struct Verdict {
  bool admissible = false;
  double c_loss = 0.0;
  SubproblemResult certificate;
};

Verdict check_admissibility(const grid::Network& net, const grid::UcSchedule& uc,
                            const grid::PriceSchedule& prices, const uncertainty::Boundary& b,
                            const uncertainty::Budgets& budgets, double c_loss,
                            const SubproblemConfig& cfg = {});

// {objective, vertex: [{farm, period, sign}], wind_mw: [[...]]}, 1-based.
nlohmann::json subproblem_to_json(const SubproblemResult& r);

}  // namespace windadm::admissibility
