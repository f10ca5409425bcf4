#include <gtest/gtest.h>

#include "support/fixture.hpp"
#include "windadm/assessment/assessment.hpp"
#include "windadm/common/error.hpp"
#include "windadm/scuc/scuc.hpp"

namespace windadm::assessment {
namespace {

using uncertainty::Boundary;
using uncertainty::Budgets;

struct Instance {
  grid::Case c;
  grid::UcSchedule uc;
  risk::ErrorModel em;
  risk::PlaConfig pla;

  explicit Instance(int horizon, double sigma = 0.10)
      : c(testing::truncate_horizon(testing::fixture_case(), horizon)),
        uc(scuc::solve_scuc(c.network).uc),
        em(c.network, sigma) {}

  const grid::Network& net() const { return c.network; }
  risk::PlaCoefficients cuts() const { return risk::build_pla(em, pla, c.prices); }
  grid::CompactRecourse recourse() const {
    return grid::build_compact_recourse(c.network, uc, c.prices);
  }
  AssessmentResult run(const Budgets& budgets, AssessmentConfig cfg = {}) const {
    return run_assessment(c.network, uc, c.prices, em, pla, budgets, cfg);
  }
  // The outermost ladder quantiles, straight from the error model.
  Boundary support_box() const {
    Boundary b = Boundary::full_width(c.network);
    for (int m = 0; m < c.network.num_farms(); ++m) {
      for (int t = 0; t < c.network.horizon; ++t) {
        const double fc = em.forecast(m, t);
        b.upper[m][t] = std::min(fc + em.inverse_cdf(m, t, 1.0 - pla.alpha0), em.capacity(m));
        b.lower[m][t] = std::max(fc + em.inverse_cdf(m, t, pla.alpha0), 0.0);
      }
    }
    return b;
  }
};

double max_width_gap(const Boundary& a, const Boundary& b) {
  double gap = 0.0;
  for (std::size_t m = 0; m < a.upper.size(); ++m) {
    for (std::size_t t = 0; t < a.upper[m].size(); ++t) {
      gap = std::max({gap, std::abs(a.upper[m][t] - b.upper[m][t]),
                      std::abs(a.lower[m][t] - b.lower[m][t])});
    }
  }
  return gap;
}

// Activity minus rhs of the last row, with boundary columns set from b and
// everything else at zero.
double last_row_excess(const MasterState& ms, const Boundary& b, int horizon) {
  const auto& prog = ms.program();
  std::vector<double> x(prog.num_variables(), 0.0);
  const auto wv = b.indicator_values(horizon);
  for (std::size_t y = 0; y < wv.size(); ++y) x[ms.boundary_var(static_cast<int>(y))] = wv[y];
  const auto& row = prog.constraint(prog.num_constraints() - 1);
  double act = 0.0;
  for (const auto& t : row.terms) act += t.coef * x[t.var];
  return act - row.rhs;
}

TEST(Mode, ParsesAndPrints) {
  for (Mode m : {Mode::kA1, Mode::kA2, Mode::kA3}) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_THROW(parse_mode("a4"), Error);
}

TEST(Master, InitialSolveIsWidestAtZeroRisk) {
  const Instance in(6);
  AssessmentConfig cfg;
  cfg.c_loss = 250.0;
  MasterState ms(in.cuts(), in.net(), in.recourse(), cfg);
  EXPECT_EQ(ms.cut_count(), 2 * 1 * 6 * in.pla.pieces() * in.pla.z);
  const auto sol = ms.solve();
  EXPECT_LT(max_width_gap(sol.boundary, in.support_box()), 1e-6);
  EXPECT_NEAR(sol.risk, 0.0, 1e-9);
  EXPECT_NEAR(sol.eta, 250.0, 1e-9);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);

  cfg.clip_to_pla_support = false;
  MasterState wide(in.cuts(), in.net(), in.recourse(), cfg);
  EXPECT_LT(max_width_gap(wide.solve().boundary, Boundary::full_width(in.net())), 1e-6);
}

TEST(Master, CutSeparatesItsOrigin) {
  const Instance in(6);
  AssessmentConfig cfg;
  MasterState ms(in.cuts(), in.net(), in.recourse(), cfg);
  const auto sol = ms.solve();
  const auto sr = admissibility::solve_subproblem(
      admissibility::compile_subproblem(in.net(), in.uc, in.c.prices, sol.boundary, {2, 1}));
  ASSERT_GT(sr.objective, 1.0);
  ms.add_iteration(sr, sol.boundary);
  // The cut reads -lambda'P((w - w_k) o v) <= C_loss - F; at w_k the excess is F.
  EXPECT_NEAR(last_row_excess(ms, sol.boundary, 6), sr.objective, 1e-6 * sr.objective);
  const auto next = ms.solve();
  EXPECT_GT(max_width_gap(next.boundary, sol.boundary), 1e-3);
  EXPECT_GE(next.objective, sol.objective - 1e-9);
}

TEST(Master, SlackCutKeepsOrigin) {
  const Instance in(6);
  MasterState ms(in.cuts(), in.net(), in.recourse(), {});
  const auto sol = ms.solve();
  const auto sr = admissibility::solve_subproblem(
      admissibility::compile_subproblem(in.net(), in.uc, in.c.prices, sol.boundary, {0, 0}));
  ASSERT_NEAR(sr.objective, 0.0, 1e-9);
  ms.add_iteration(sr, sol.boundary);
  EXPECT_LE(last_row_excess(ms, sol.boundary, 6), 1e-9);
  const auto next = ms.solve();
  EXPECT_NEAR(next.objective, sol.objective, 1e-9);
}

TEST(Master, GrowsByOneBlockPerIteration) {
  const Instance in(6);
  for (Mode mode : {Mode::kA1, Mode::kA3}) {
    AssessmentConfig cfg;
    cfg.mode = mode;
    MasterState ms(in.cuts(), in.net(), in.recourse(), cfg);
    const int cols = ms.program().num_variables();
    const int rows = ms.program().num_constraints();
    const auto sol = ms.solve();
    const auto sr = admissibility::solve_subproblem(
        admissibility::compile_subproblem(in.net(), in.uc, in.c.prices, sol.boundary, {1, 1}));
    ms.add_iteration(sr, sol.boundary);
    const int cut = mode == Mode::kA3 ? 0 : 1;
    EXPECT_EQ(ms.program().num_variables() - cols, ms.block_columns());
    EXPECT_EQ(ms.program().num_constraints() - rows, ms.block_rows() + cut);
    EXPECT_EQ(ms.iterations(), 1);
  }
}

TEST(Master, StaleResultIsRejected) {
  const Instance in(6);
  MasterState ms(in.cuts(), in.net(), in.recourse(), {});
  const auto sol = ms.solve();
  const auto sr = admissibility::solve_subproblem(
      admissibility::compile_subproblem(in.net(), in.uc, in.c.prices, sol.boundary, {1, 1}));
  const auto other = Boundary::at_forecast(in.net());
  try {
    ms.add_iteration(sr, other);
    FAIL() << "expected a stale-result error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStaleResult);
  }
}

TEST(Assessment, ZeroBudgetKeepsWidestBox) {
  const Instance in(6);
  const auto r = in.run({0, 0});
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.log.size(), 2u);
  EXPECT_NEAR(r.risk_pla, 0.0, 1e-9);
  EXPECT_LT(max_width_gap(r.boundary, in.support_box()), 1e-6);
  AssessmentConfig cfg;
  cfg.clip_to_pla_support = false;
  const auto wide = in.run({0, 0}, cfg);
  EXPECT_NEAR(wide.exact.total, 0.0, 1e-9);
  EXPECT_LT(max_width_gap(wide.boundary, Boundary::full_width(in.net())), 1e-6);
}

TEST(Assessment, ConvergedBoundaryIsAdmissible) {
  const Instance in(6);
  const Budgets budgets{2, 1};
  const auto r = in.run(budgets);
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(r.certified);
  EXPECT_GT(r.risk_pla, 0.0);
  for (std::size_t k = 1; k < r.log.size(); ++k) {
    EXPECT_GE(r.log[k].g, r.log[k - 1].g - 1e-7) << "iteration " << k + 1;
  }
  EXPECT_NEAR(r.eta, 0.0, 1e-6);
  EXPECT_NEAR(r.master_objective, r.risk_pla, 1e-6);
  const auto verdict =
      admissibility::check_admissibility(in.net(), in.uc, in.c.prices, r.boundary, budgets, 0.0);
  EXPECT_TRUE(verdict.admissible);
}

TEST(Assessment, OracleSubproblemGivesSameRisk) {
  const Instance in(6);
  AssessmentConfig cfg;
  const auto milp = in.run({2, 1}, cfg);
  cfg.oracle_subproblem = true;
  const auto oracle = in.run({2, 1}, cfg);
  ASSERT_TRUE(milp.converged && oracle.converged);
  EXPECT_NEAR(milp.risk_pla, oracle.risk_pla, 1e-4);
}

TEST(Assessment, FeasibilityCutsAloneAgree) {
  const Instance in(6);
  const auto base = in.run({1, 1});
  AssessmentConfig cfg;
  cfg.mode = Mode::kA2;
  const auto r = in.run({1, 1}, cfg);
  EXPECT_TRUE(r.converged && r.certified);
  EXPECT_NEAR(r.risk_pla, base.risk_pla, 1e-4);
  EXPECT_LT(max_width_gap(r.boundary, base.boundary), 1e-3);
}

// Without feasibility cuts the penalty alone must outweigh the risk saved by
// tolerating recourse cost; a small K stops at an uncertified boundary.
TEST(Assessment, PenaltyOnlyNeedsLargeK) {
  const Instance in(6);
  const auto base = in.run({1, 1});
  AssessmentConfig cfg;
  cfg.mode = Mode::kA3;
  cfg.penalty_k = 1e4;
  const auto large = in.run({1, 1}, cfg);
  EXPECT_TRUE(large.converged);
  EXPECT_NEAR(large.risk_pla, base.risk_pla, 1e-4);
  cfg.penalty_k = 1e-3;
  const auto small = in.run({1, 1}, cfg);
  EXPECT_FALSE(small.certified);
  EXPECT_LT(small.risk_pla, base.risk_pla);
}

TEST(Assessment, LossAllowanceWidensRegion) {
  const Instance in(6);
  AssessmentConfig cfg;
  const auto tight = in.run({2, 1}, cfg);
  cfg.c_loss = 1000.0;
  const auto loose = in.run({2, 1}, cfg);
  ASSERT_TRUE(tight.converged && loose.converged);
  EXPECT_LE(loose.risk_pla, tight.risk_pla + 1e-6);
  EXPECT_NEAR(loose.eta, 1000.0, 1e-6);
}

TEST(Assessment, IterationCapIsFlagged) {
  const Instance in(6);
  AssessmentConfig cfg;
  cfg.max_iterations = 1;
  const auto r = in.run({2, 1}, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.log.size(), 1u);
}

TEST(Assessment, RejectsBadConfig) {
  const Instance in(6);
  AssessmentConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(in.run({1, 1}, cfg), Error);
}

}  // namespace
}  // namespace windadm::assessment
