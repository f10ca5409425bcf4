#include "windadm/assessment/assessment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "windadm/common/error.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::assessment {

using lp::Relation;
using lp::Term;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kA1: return "a1";
    case Mode::kA2: return "a2";
    case Mode::kA3: return "a3";
  }
  return "a1";
}

Mode parse_mode(std::string_view text) {
  if (text == "a1") return Mode::kA1;
  if (text == "a2") return Mode::kA2;
  if (text == "a3") return Mode::kA3;
  throw Error(ErrorCode::kSchemaViolation, fmt::format("unknown mode '{}' (a1, a2 or a3)", text));
}

MasterState::MasterState(const risk::PlaCoefficients& pc, const grid::Network& net,
                         grid::CompactRecourse recourse, const AssessmentConfig& cfg)
    : net_(net), recourse_(std::move(recourse)), cfg_(cfg) {
  const int M = net.num_farms();
  const int T = net.horizon;
  if (pc.farms != M || pc.horizon != T) {
    throw Error(ErrorCode::kDimensionMismatch, "PLA cuts do not match the network");
  }
  boundary_var_.assign(2 * M * T, -1);
  for (int m = 0; m < M; ++m) {
    const auto& farm = net.wind_farms[m];
    for (int t = 0; t < T; ++t) {
      const double fc = farm.forecast_mw[t];
      double hi = farm.capacity_mw;
      double lo = 0.0;
      if (cfg.clip_to_pla_support) {
        const auto& fu = pc.f_upper[m][t];
        const auto& fl = pc.f_lower[m][t];
        hi = std::clamp(fc + *std::max_element(fu.begin(), fu.end()), fc, hi);
        lo = std::clamp(fc + *std::min_element(fl.begin(), fl.end()), lo, fc);
      }
      boundary_var_[grid::wind_binary(m, t, true, T)] = lp_.add_variable(
          fc, hi, -kWidthReward, fmt::format("wu_m{}_t{}", m + 1, t + 1));
      boundary_var_[grid::wind_binary(m, t, false, T)] = lp_.add_variable(
          lo, fc, kWidthReward, fmt::format("wl_m{}_t{}", m + 1, t + 1));
    }
  }
  qp_.assign(M, std::vector<int>(T));
  qn_.assign(M, std::vector<int>(T));
  for (int m = 0; m < M; ++m) {
    for (int t = 0; t < T; ++t) {
      qp_[m][t] = lp_.add_variable(0.0, lp::kInf, 1.0, fmt::format("qp_m{}_t{}", m + 1, t + 1));
      qn_[m][t] = lp_.add_variable(0.0, lp::kInf, 1.0, fmt::format("qn_m{}_t{}", m + 1, t + 1));
      const int wu = boundary_var_[grid::wind_binary(m, t, true, T)];
      const int wl = boundary_var_[grid::wind_binary(m, t, false, T)];
      for (const risk::Cut& c : pc.upper[m][t]) {
        lp_.add_constraint({{qp_[m][t], 1.0}, {wu, -c.a}}, Relation::kGreaterEqual, c.b);
        ++cut_count_;
      }
      for (const risk::Cut& c : pc.lower[m][t]) {
        lp_.add_constraint({{qn_[m][t], 1.0}, {wl, -c.a}}, Relation::kGreaterEqual, c.b);
        ++cut_count_;
      }
    }
  }
  eta_ = lp_.add_variable(cfg.c_loss, lp::kInf, cfg.penalty_k, "eta");
  lp_.set_objective_offset(-cfg.penalty_k * cfg.c_loss);
}

void MasterState::add_iteration(const admissibility::SubproblemResult& sr,
                                const uncertainty::Boundary& b_k) {
  bool same = sr.boundary.upper.size() == b_k.upper.size();
  for (std::size_t m = 0; same && m < b_k.upper.size(); ++m) {
    for (std::size_t t = 0; same && t < b_k.upper[m].size(); ++t) {
      same = std::abs(sr.boundary.upper[m][t] - b_k.upper[m][t]) <= 1e-9 &&
             std::abs(sr.boundary.lower[m][t] - b_k.lower[m][t]) <= 1e-9;
    }
  }
  if (!same) {
    throw Error(ErrorCode::kStaleResult,
                "subproblem result was computed at a different boundary");
  }
  const int k = ++iterations_;
  const auto& v = sr.vertex.v;

  const int first = lp_.num_variables();
  for (int j = 0; j < recourse_.num_vars; ++j) {
    lp_.add_variable(recourse_.nonneg[j] ? 0.0 : -lp::kInf, lp::kInf, 0.0);
  }
  for (const grid::CompactRow& row : recourse_.rows) {
    std::vector<Term> terms;
    for (const Term& t : row.a) terms.push_back({first + t.var, t.coef});
    double rhs = row.r;
    for (const auto& [y, c] : row.x) rhs -= c * v[y];
    for (const auto& [y, c] : row.p) {
      if (v[y]) terms.push_back({boundary_var_[y], c});
    }
    lp_.add_constraint(std::move(terms), row.equality ? Relation::kEqual : Relation::kLessEqual,
                       rhs, fmt::format("k{}_{}", k, row.name));
  }
  std::vector<Term> cost{{eta_, -1.0}};
  for (int j = 0; j < recourse_.num_vars; ++j) {
    if (recourse_.cost[j] != 0.0) cost.push_back({first + j, recourse_.cost[j]});
  }
  lp_.add_constraint(std::move(cost), Relation::kLessEqual, 0.0, fmt::format("k{}_cost", k));

  if (cfg_.mode == Mode::kA3) return;
  const auto wk = b_k.indicator_values(net_.horizon);
  std::vector<double> coef(v.size(), 0.0);
  for (std::size_t i = 0; i < recourse_.rows.size(); ++i) {
    for (const auto& [y, c] : recourse_.rows[i].p) {
      if (v[y]) coef[y] -= sr.lambda[i] * c;
    }
  }
  std::vector<Term> cut;
  double rhs = cfg_.c_loss - sr.objective;
  for (std::size_t y = 0; y < coef.size(); ++y) {
    if (coef[y] == 0.0) continue;
    cut.push_back({boundary_var_[y], coef[y]});
    rhs += coef[y] * wk[y];
  }
  lp_.add_constraint(std::move(cut), Relation::kLessEqual, rhs, fmt::format("k{}_feas", k));
}

MasterSolution MasterState::solve() const {
  const auto sol = lp::solve_lp(lp_, cfg_.master_tolerances);
  if (sol.status != lp::LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericBreakdown,
                fmt::format("master LP reported {} after {} iterations",
                            lp::to_string(sol.status), iterations_));
  }
  const int M = net_.num_farms();
  const int T = net_.horizon;
  MasterSolution out;
  out.eta = sol.x[eta_];
  out.boundary.upper.assign(M, std::vector<double>(T));
  out.boundary.lower.assign(M, std::vector<double>(T));
  out.q.q_p.assign(M, std::vector<double>(T));
  out.q.q_n.assign(M, std::vector<double>(T));
  for (int m = 0; m < M; ++m) {
    const auto& farm = net_.wind_farms[m];
    for (int t = 0; t < T; ++t) {
      const double fc = farm.forecast_mw[t];
      out.boundary.upper[m][t] =
          std::clamp(sol.x[boundary_var_[grid::wind_binary(m, t, true, T)]], fc, farm.capacity_mw);
      out.boundary.lower[m][t] =
          std::clamp(sol.x[boundary_var_[grid::wind_binary(m, t, false, T)]], 0.0, fc);
      out.q.q_p[m][t] = sol.x[qp_[m][t]];
      out.q.q_n[m][t] = sol.x[qn_[m][t]];
      out.risk += out.q.q_p[m][t] + out.q.q_n[m][t];
    }
  }
  out.q.total = out.risk;
  out.objective = out.risk + cfg_.penalty_k * (out.eta - cfg_.c_loss);
  return out;
}

AssessmentResult run_assessment(const grid::Network& net, const grid::UcSchedule& uc,
                                const grid::PriceSchedule& prices,
                                const risk::ErrorModel& em, const risk::PlaConfig& pla,
                                const uncertainty::Budgets& budgets,
                                const AssessmentConfig& cfg_in,
                                const IterationObserver& observer) {
  AssessmentConfig cfg = cfg_in;
  if (cfg.mode == Mode::kA2) cfg.penalty_k = 0.0;
  if (!(cfg.c_loss >= 0.0) || !(cfg.penalty_k >= 0.0) || !(cfg.epsilon > 0.0) ||
      cfg.max_iterations < 1) {
    throw Error(ErrorCode::kSchemaViolation,
                "assessment needs c_loss >= 0, K >= 0, epsilon > 0 and max_iterations >= 1");
  }
  prices.validate(net);
  uc.validate(net);
  budgets.validate(net.num_farms(), net.horizon);

  const auto pc = risk::build_pla(em, pla, prices);
  MasterState master(pc, net, grid::build_compact_recourse(net, uc, prices), cfg);

  AssessmentResult result;
  double previous_g = 0.0;
  MasterSolution sol;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const auto start = std::chrono::steady_clock::now();
    sol = master.solve();
    admissibility::SubproblemResult sr =
        cfg.oracle_subproblem
            ? admissibility::oracle_subproblem(net, uc, prices, sol.boundary, budgets)
            : admissibility::solve_subproblem(
                  admissibility::compile_subproblem(net, uc, prices, sol.boundary, budgets,
                                                    cfg.subproblem),
                  cfg.subproblem);
    IterationLog entry;
    entry.k = k;
    entry.g = sol.objective;
    entry.f_r = sr.objective;
    entry.eta = sol.eta;
    entry.master_rows = master.program().num_constraints();
    entry.nodes = sr.nodes;
    entry.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    result.log.push_back(entry);
    if (observer) observer(entry);

    const bool certified = sr.objective <= cfg.c_loss + admissibility::kVerdictTolerance;
    const bool settled = k > 1 && std::abs(sol.objective - previous_g) < cfg.epsilon;
    previous_g = sol.objective;
    result.last_subproblem = std::move(sr);
    if (certified || (cfg.mode == Mode::kA3 && settled)) {
      result.converged = true;
      result.certified = certified;
      break;
    }
    if (k == cfg.max_iterations) break;
    master.add_iteration(result.last_subproblem, sol.boundary);
  }

  result.boundary = sol.boundary;
  result.eta = sol.eta;
  result.master_objective = sol.objective;
  result.final_f_r = result.last_subproblem.objective;
  if (!result.converged) {
    result.certified =
        result.final_f_r <= cfg.c_loss + admissibility::kVerdictTolerance;
  }
  result.q = risk::risk_pla(result.boundary, pc);
  result.risk_pla = result.q.total;
  result.exact = risk::risk_exact(result.boundary, em, prices);
  return result;
}

}  // namespace windadm::assessment
