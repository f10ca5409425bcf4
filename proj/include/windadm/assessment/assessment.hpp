#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "windadm/admissibility/subproblem.hpp"
#include "windadm/lp/linear_program.hpp"
#include "windadm/risk/pla.hpp"
#include "windadm/risk/risk.hpp"

namespace windadm::assessment {

// a1: recourse columns plus feasibility cuts with the eta penalty.
// a2: the same rows with K = 0, so only the feasibility cuts bind.
// a3: recourse columns and the penalty only; no feasibility cuts.
enum class Mode { kA1, kA2, kA3 };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct AssessmentConfig {
  double c_loss = 0.0;
  double penalty_k = 100.0;
  double epsilon = 1e-3;  // $
  int max_iterations = 100;
  Mode mode = Mode::kA1;
  admissibility::SubproblemConfig subproblem{};
  // Replace the MILP by exhaustive vertex enumeration (small cases only).
  bool oracle_subproblem = false;
  // Bound w^u and w^l by the outermost PLA breakpoints instead of capacity
  // and zero. The PLA risk is identically zero beyond them.
  bool clip_to_pla_support = true;
  lp::Tolerances master_tolerances{};
};

// Per-MW reward for boundary width in the master objective. It only picks
// the widest boundary among those with equal risk: every nonzero risk cut
// slope is orders of magnitude steeper.
inline constexpr double kWidthReward = 1e-6;  // $/MW

struct MasterSolution {
  double objective = 0.0;  // G + K (eta - C_loss), width reward excluded
  double risk = 0.0;       // G = sum of Q
  double eta = 0.0;
  uncertainty::Boundary boundary;
  risk::RiskValue q;
};

// Master LP over the boundary, the risk epigraph and one recourse block per
// generated vertex:
//
//   min  sum Q + K (eta - C_loss) - kWidthReward sum (w^u - w^l)
//   s.t. forecast <= w^u <= capacity, 0 <= w^l <= forecast
//        (optionally narrowed to the PLA support)
//        Q^p >= a^p w^u + b^p, Q^n >= a^n w^l + b^n, Q >= 0
//        eta >= C_loss
//   and per iteration k with vertex v_k and row multipliers lambda_k
//        dispatch rows at wind (w o v_k), cost row e'dw^k + f'dD^k <= eta
//        -lambda_k' P ((w - w_k) o v_k) <= C_loss - F_k          (not in a3)
class MasterState {
 public:
  MasterState(const risk::PlaCoefficients& pc, const grid::Network& net,
              grid::CompactRecourse recourse, const AssessmentConfig& cfg);

  // Throws kStaleResult when `sr` was computed at a boundary other than b_k.
  void add_iteration(const admissibility::SubproblemResult& sr,
                     const uncertainty::Boundary& b_k);
  MasterSolution solve() const;

  const lp::LinearProgram& program() const { return lp_; }
  int iterations() const { return iterations_; }
  int cut_count() const { return cut_count_; }
  int block_columns() const { return recourse_.num_vars; }
  int block_rows() const { return static_cast<int>(recourse_.rows.size()) + 1; }
  int eta_var() const { return eta_; }
  // Master column holding the boundary value of an indicator.
  int boundary_var(int indicator) const { return boundary_var_[indicator]; }

 private:
  grid::Network net_;
  grid::CompactRecourse recourse_;
  AssessmentConfig cfg_;
  lp::LinearProgram lp_;
  std::vector<int> boundary_var_;
  std::vector<std::vector<int>> qp_, qn_;
  int eta_ = -1;
  int iterations_ = 0;
  int cut_count_ = 0;
};

struct IterationLog {
  int k = 0;
  double g = 0.0;    // master objective
  double f_r = 0.0;  // worst-case dispatch cost at the master boundary
  double eta = 0.0;
  int master_rows = 0;
  double wall_ms = 0.0;
  std::int64_t nodes = 0;
};

struct AssessmentResult {
  uncertainty::Boundary boundary;
  double risk_pla = 0.0;  // G
  risk::RiskValue q;      // PLA decomposition of G
  risk::RiskValue exact;  // quadrature at the same boundary
  double eta = 0.0;
  double master_objective = 0.0;
  double final_f_r = 0.0;
  bool converged = false;
  bool certified = false;  // final F^R <= C_loss + tolerance
  std::vector<IterationLog> log;
  admissibility::SubproblemResult last_subproblem;
};

using IterationObserver = std::function<void(const IterationLog&)>;

// Alternates master and worst-case subproblem. Stops once the worst case at
// the master boundary is within C_loss (a1/a2) or, in a3, once the master
// objective moves by less than epsilon. Hitting the iteration cap returns
// the last boundary with converged = false.
AssessmentResult run_assessment(const grid::Network& net, const grid::UcSchedule& uc,
                                const grid::PriceSchedule& prices,
                                const risk::ErrorModel& em, const risk::PlaConfig& pla,
                                const uncertainty::Budgets& budgets,
                                const AssessmentConfig& cfg,
                                const IterationObserver& observer = {});

}  // namespace windadm::assessment
