#include "windadm/admissibility/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "windadm/common/error.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::admissibility {

using lp::Relation;
using lp::Term;

CompiledSubproblem compile_subproblem(const grid::Network& net, const grid::UcSchedule& uc,
                                      const grid::PriceSchedule& prices,
                                      const uncertainty::Boundary& b,
                                      const uncertainty::Budgets& budgets,
                                      const SubproblemConfig& cfg) {
  b.validate(net);
  budgets.validate(net.num_farms(), net.horizon);
  prices.validate(net);

  CompiledSubproblem cs;
  cs.net = net;
  cs.recourse = grid::build_compact_recourse(net, uc, prices);
  cs.boundary = b;
  cs.budgets = budgets;
  cs.wv = b.indicator_values(net.horizon);
  cs.m_big = cfg.m_big > 0.0 ? cfg.m_big : 10.0 * prices.max_recourse_price();
  if (!(cs.m_big > 0.0)) {
    throw Error(ErrorCode::kSchemaViolation, "big-M bound must be positive");
  }
  const auto& cr = cs.recourse;
  const int rows = static_cast<int>(cr.rows.size());
  const double M = cs.m_big;

  // d_iy = X_iy + P_iy w_y, merged per (row, indicator); zeros dropped.
  std::vector<std::map<int, double>> d(rows);
  for (int i = 0; i < rows; ++i) {
    for (const auto& [y, c] : cr.rows[i].x) d[i][y] += c;
    for (const auto& [y, c] : cr.rows[i].p) d[i][y] += c * cs.wv[y];
  }

  lp::LinearProgram& prog = cs.milp.lp();
  prog.set_sense(lp::Sense::kMaximize);
  cs.lambda_var.resize(rows);
  for (int i = 0; i < rows; ++i) {
    bool carries_wind = false;
    for (const auto& [y, val] : d[i]) carries_wind |= val != 0.0;
    const bool eq = cr.rows[i].equality;
    cs.lambda_var[i] = cs.milp.add_variable(carries_wind ? -M : -lp::kInf,
                                            eq ? (carries_wind ? M : lp::kInf) : 0.0,
                                            cr.rows[i].r, "lambda_" + cr.rows[i].name);
  }
  cs.v_var.resize(cr.num_binaries);
  for (int y = 0; y < cr.num_binaries; ++y) {
    cs.v_var[y] = cs.milp.add_binary(0.0, fmt::format("v{}", y));
  }
  for (int i = 0; i < rows; ++i) {
    for (const auto& [y, val] : d[i]) {
      if (val == 0.0) continue;
      BilinearTerm term{i, y, val, 0};
      term.var = cs.milp.add_variable(-M, cr.rows[i].equality ? M : 0.0, -val,
                                      fmt::format("gamma_{}_{}", i, y));
      cs.terms.push_back(term);
    }
  }

  // Dual feasibility, one row per dispatch column.
  std::vector<std::vector<Term>> columns(cr.num_vars);
  for (int i = 0; i < rows; ++i) {
    for (const Term& t : cr.rows[i].a) columns[t.var].push_back({cs.lambda_var[i], t.coef});
  }
  for (int j = 0; j < cr.num_vars; ++j) {
    prog.add_constraint(columns[j], cr.nonneg[j] ? Relation::kLessEqual : Relation::kEqual,
                        cr.cost[j], fmt::format("dual_{}", j));
  }

  const int T = net.horizon;
  for (int m = 0; m < net.num_farms(); ++m) {
    std::vector<Term> row;
    for (int t = 0; t < T; ++t) {
      row.push_back({cs.v_var[grid::wind_binary(m, t, true, T)], 1.0});
      row.push_back({cs.v_var[grid::wind_binary(m, t, false, T)], 1.0});
    }
    prog.add_constraint(row, Relation::kLessEqual, budgets.gamma_t,
                        fmt::format("budget_time_m{}", m + 1));
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> row;
    for (int m = 0; m < net.num_farms(); ++m) {
      row.push_back({cs.v_var[grid::wind_binary(m, t, true, T)], 1.0});
      row.push_back({cs.v_var[grid::wind_binary(m, t, false, T)], 1.0});
    }
    prog.add_constraint(row, Relation::kLessEqual, budgets.gamma_s,
                        fmt::format("budget_space_t{}", t + 1));
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < T; ++t) {
      prog.add_constraint({{cs.v_var[grid::wind_binary(m, t, true, T)], 1.0},
                           {cs.v_var[grid::wind_binary(m, t, false, T)], 1.0}},
                          Relation::kLessEqual, 1.0, fmt::format("one_side_m{}_t{}", m + 1, t + 1));
    }
  }

  for (const BilinearTerm& term : cs.terms) {
    const int lam = cs.lambda_var[term.row];
    const int v = cs.v_var[term.indicator];
    prog.add_constraint({{term.var, 1.0}, {v, M}}, Relation::kGreaterEqual, 0.0);
    prog.add_constraint({{lam, 1.0}, {term.var, -1.0}, {v, -M}}, Relation::kGreaterEqual, -M);
    if (cs.recourse.rows[term.row].equality) {
      prog.add_constraint({{term.var, 1.0}, {v, -M}}, Relation::kLessEqual, 0.0);
      prog.add_constraint({{lam, 1.0}, {term.var, -1.0}, {v, M}}, Relation::kLessEqual, M);
    } else {
      prog.add_constraint({{lam, 1.0}, {term.var, -1.0}}, Relation::kLessEqual, 0.0);
    }
  }
  return cs;
}

SubproblemResult evaluate_vertex(const grid::CompactRecourse& cr, const grid::Network& net,
                                 const uncertainty::Boundary& b,
                                 const uncertainty::Vertex& v, const lp::Tolerances& tol) {
  const auto wv = b.indicator_values(net.horizon);
  const auto vd = v.as_doubles();
  const auto sol = lp::solve_lp(cr.instantiate(wv, vd), tol);
  if (sol.status != lp::LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericBreakdown,
                fmt::format("dispatch LP at the worst-case vertex reported {}",
                            lp::to_string(sol.status)));
  }
  SubproblemResult r;
  r.boundary = b;
  r.vertex = v;
  r.lambda = sol.duals;
  r.objective = std::max(0.0, sol.objective);
  r.milp_objective = r.objective;
  r.wind = uncertainty::realize_wind(v, b, net);
  const grid::RecourseIndex ix(net);
  const int T = net.horizon;
  auto& dp = r.dispatch;
  dp.p.assign(net.num_generators(), std::vector<double>(T));
  dp.theta.assign(net.nodes, std::vector<double>(T));
  dp.dw.assign(net.num_farms(), std::vector<double>(T));
  dp.dd.assign(net.num_loads(), std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < net.num_generators(); ++g) dp.p[g][t] = sol.x[ix.p(g, t)];
    for (int n = 0; n < net.nodes; ++n) dp.theta[n][t] = sol.x[ix.theta(n, t)];
    for (int m = 0; m < net.num_farms(); ++m) dp.dw[m][t] = sol.x[ix.dw(m, t)];
    for (int j = 0; j < net.num_loads(); ++j) dp.dd[j][t] = sol.x[ix.dd(j, t)];
  }
  dp.objective = r.objective;
  return r;
}

SubproblemResult solve_subproblem(const CompiledSubproblem& cs, const SubproblemConfig& cfg) {
  const auto res = lp::solve_milp(cs.milp, cfg.tolerances, cfg.node_limit);
  if (!res.has_incumbent) {
    throw Error(ErrorCode::kNumericBreakdown,
                fmt::format("worst-case MILP ended {} without a solution",
                            lp::to_string(res.status)));
  }
  const grid::Network& net = cs.net;
  uncertainty::Vertex vertex(net.num_farms(), net.horizon);
  for (int y = 0; y < static_cast<int>(cs.v_var.size()); ++y) {
    vertex.v[y] = res.x[cs.v_var[y]] > 0.5 ? 1 : 0;
  }
  SubproblemResult r = evaluate_vertex(cs.recourse, net, cs.boundary, vertex, cfg.tolerances);
  r.milp_objective = res.objective;
  r.milp_gap = res.gap;
  r.proven_optimal = res.status == lp::MilpStatus::kOptimal;
  r.nodes = res.nodes;

  const double limit = 0.99 * cs.m_big;
  for (const BilinearTerm& term : cs.terms) {
    const double lam = res.x[cs.lambda_var[term.row]];
    const double v = res.x[cs.v_var[term.indicator]];
    r.bilinear_error = std::max(r.bilinear_error, std::abs(res.x[term.var] - lam * v));
    const double clean = r.lambda[term.row];
    if (std::abs(clean) >= limit) {
      throw Error(ErrorCode::kBigMTooSmall,
                  fmt::format("dispatch multiplier of row {} is {:.6g} against a bound of "
                              "{:.6g}; raise admissibility.m_big",
                              cs.recourse.rows[term.row].name, clean, cs.m_big));
    }
  }
  // A multiplier may rest on the bound harmlessly when its row has a zero
  // right-hand side. Truncation shows up as the MILP value falling short of
  // the dispatch cost at the same vertex.
  const double shortfall = r.objective - r.milp_objective;
  if (shortfall > 1e-6 * std::max(1.0, std::abs(r.objective))) {
    throw Error(ErrorCode::kBigMTooSmall,
                fmt::format("worst-case MILP value {:.6g} is below the dispatch cost {:.6g} at "
                            "its vertex; raise admissibility.m_big",
                            r.milp_objective, r.objective));
  }
  return r;
}

SubproblemResult oracle_subproblem(const grid::Network& net, const grid::UcSchedule& uc,
                                   const grid::PriceSchedule& prices,
                                   const uncertainty::Boundary& b,
                                   const uncertainty::Budgets& budgets, std::uint64_t cap) {
  b.validate(net);
  const auto cr = grid::build_compact_recourse(net, uc, prices);
  SubproblemResult best;
  bool have = false;
  uncertainty::enumerate_vertices(
      net.num_farms(), net.horizon, budgets,
      [&](const uncertainty::Vertex& v) {
        SubproblemResult r = evaluate_vertex(cr, net, b, v);
        if (!have || r.objective > best.objective + 1e-9 * (1.0 + best.objective)) {
          best = std::move(r);
          have = true;
        }
      },
      cap);
  return best;
}

Verdict check_admissibility(const grid::Network& net, const grid::UcSchedule& uc,
                            const grid::PriceSchedule& prices, const uncertainty::Boundary& b,
                            const uncertainty::Budgets& budgets, double c_loss,
                            const SubproblemConfig& cfg) {
  if (!(c_loss >= 0.0)) throw Error(ErrorCode::kSchemaViolation, "c_loss must be >= 0");
  Verdict verdict;
  verdict.c_loss = c_loss;
  verdict.certificate = solve_subproblem(compile_subproblem(net, uc, prices, b, budgets, cfg), cfg);
  verdict.admissible = verdict.certificate.objective <= c_loss + kVerdictTolerance;
  return verdict;
}

nlohmann::json subproblem_to_json(const SubproblemResult& r) {
  nlohmann::json doc;
  doc["objective"] = r.objective;
  doc["vertex"] = nlohmann::json::array();
  for (int m = 0; m < r.vertex.farms; ++m) {
    for (int t = 0; t < r.vertex.horizon; ++t) {
      if (r.vertex.upper(m, t)) doc["vertex"].push_back({{"farm", m + 1}, {"period", t + 1}, {"sign", "+"}});
      if (r.vertex.lower(m, t)) doc["vertex"].push_back({{"farm", m + 1}, {"period", t + 1}, {"sign", "-"}});
    }
  }
  doc["wind_mw"] = r.wind;
  return doc;
}

}  // namespace windadm::admissibility
