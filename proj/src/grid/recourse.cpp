#include "windadm/grid/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "windadm/common/error.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::grid {
namespace {

using lp::Relation;
using lp::Term;

void check_wind(const Network& net, const WindSeries& wind) {
  if (static_cast<int>(wind.size()) != net.num_farms()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("wind series has {} farms, network has {}", wind.size(),
                            net.num_farms()));
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    if (static_cast<int>(wind[m].size()) != net.horizon) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("wind series for farm {} has {} periods, expected {}",
                              m + 1, wind[m].size(), net.horizon));
    }
    for (int t = 0; t < net.horizon; ++t) {
      const double w = wind[m][t];
      if (!(w >= -1e-9 && w <= net.wind_farms[m].capacity_mw + 1e-9)) {
        throw Error(ErrorCode::kMalformedInput,
                    fmt::format("wind for farm {} period {} is {} MW, outside [0, {}]",
                                m + 1, t + 1, w, net.wind_farms[m].capacity_mw));
      }
    }
  }
}

// Terms of the net injection at node n in period t excluding wind and
// demand: generation - curtailment + shedding - line outflow.
std::vector<Term> injection_terms(const Network& net, const RecourseIndex& ix, int n,
                                  int t) {
  std::vector<Term> terms;
  for (int g = 0; g < net.num_generators(); ++g) {
    if (net.generators[g].bus == n) terms.push_back({ix.p(g, t), 1.0});
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    if (net.wind_farms[m].bus == n) terms.push_back({ix.dw(m, t), -1.0});
  }
  for (int j = 0; j < net.num_loads(); ++j) {
    if (net.loads[j].bus == n) terms.push_back({ix.dd(j, t), 1.0});
  }
  for (int l : net.incident_lines(n)) {
    const Line& line = net.lines[l];
    const int other = line.from == n ? line.to : line.from;
    const double b = net.flow_coefficient(l);
    terms.push_back({ix.theta(n, t), -b});
    terms.push_back({ix.theta(other, t), b});
  }
  return terms;
}

double nodal_demand(const Network& net, int n, int t) {
  double d = 0.0;
  for (const Load& j : net.loads) {
    if (j.bus == n) d += j.demand_mw[t];
  }
  return d;
}

std::vector<Term> negate(std::vector<Term> terms) {
  for (Term& t : terms) t.coef = -t.coef;
  return terms;
}

}  // namespace

RecourseTally recourse_tally(const Network& net) {
  const int g = net.num_generators();
  const int t = net.horizon;
  RecourseTally tally;
  tally.columns = (g + net.nodes + net.num_farms() + net.num_loads()) * t;
  tally.rows = 2 * g * t + 2 * g * (t - 1) + 2 * net.num_lines() * t + t + net.nodes * t;
  return tally;
}

lp::LinearProgram assemble_recourse_lp(const Network& net, const UcSchedule& uc,
                                       const PriceSchedule& prices,
                                       const WindSeries& wind) {
  check_wind(net, wind);
  uc.validate(net);
  const RecourseIndex ix(net);
  const int T = net.horizon;
  lp::LinearProgram prog;

  for (int g = 0; g < net.num_generators(); ++g) {
    for (int t = 0; t < T; ++t) prog.add_variable(-lp::kInf, lp::kInf, 0.0);
  }
  for (int n = 0; n < net.nodes; ++n) {
    for (int t = 0; t < T; ++t) {
      prog.add_variable(-std::numbers::pi, std::numbers::pi, 0.0);
    }
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < T; ++t) {
      prog.add_variable(0.0, std::max(0.0, wind[m][t]), prices.curtail[m][t]);
    }
  }
  for (int j = 0; j < net.num_loads(); ++j) {
    for (int t = 0; t < T; ++t) {
      prog.add_variable(0.0, net.loads[j].demand_mw[t], prices.shed[j][t]);
    }
  }

  for (int g = 0; g < net.num_generators(); ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t < T; ++t) {
      const double u = uc.on[g][t];
      prog.add_constraint({{ix.p(g, t), 1.0}}, Relation::kGreaterEqual, u * gen.pmin_mw);
      prog.add_constraint({{ix.p(g, t), 1.0}}, Relation::kLessEqual, u * gen.pmax_mw);
    }
  }
  for (int g = 0; g < net.num_generators(); ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t + 1 < T; ++t) {
      const double u_next = uc.on[g][t + 1];
      const double u_now = uc.on[g][t];
      prog.add_constraint({{ix.p(g, t), 1.0}, {ix.p(g, t + 1), -1.0}}, Relation::kLessEqual,
                          u_next * gen.ramp_dn_mw + (1.0 - u_next) * gen.pmax_mw);
      prog.add_constraint({{ix.p(g, t + 1), 1.0}, {ix.p(g, t), -1.0}}, Relation::kLessEqual,
                          u_now * gen.ramp_up_mw + (1.0 - u_now) * gen.pmax_mw);
    }
  }
  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    const double b = net.flow_coefficient(l);
    for (int t = 0; t < T; ++t) {
      std::vector<Term> flow{{ix.theta(line.from, t), b}, {ix.theta(line.to, t), -b}};
      prog.add_constraint(flow, Relation::kLessEqual, line.capacity_mw);
      prog.add_constraint(flow, Relation::kGreaterEqual, -line.capacity_mw);
    }
  }
  for (int t = 0; t < T; ++t) {
    prog.add_constraint({{ix.theta(net.ref_node, t), 1.0}}, Relation::kEqual, 0.0);
  }
  for (int n = 0; n < net.nodes; ++n) {
    for (int t = 0; t < T; ++t) {
      double rhs = nodal_demand(net, n, t);
      for (int m = 0; m < net.num_farms(); ++m) {
        if (net.wind_farms[m].bus == n) rhs -= wind[m][t];
      }
      prog.add_constraint(injection_terms(net, ix, n, t), Relation::kEqual, rhs);
    }
  }
  return prog;
}

RecourseSolution evaluate_scenario(const Network& net, const UcSchedule& uc,
                                   const PriceSchedule& prices, const WindSeries& wind) {
  const auto prog = assemble_recourse_lp(net, uc, prices, wind);
  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericBreakdown,
                fmt::format("dispatch LP reported {}", lp::to_string(sol.status)));
  }
  const RecourseIndex ix(net);
  const int T = net.horizon;
  RecourseSolution out;
  out.p.assign(net.num_generators(), std::vector<double>(T));
  out.theta.assign(net.nodes, std::vector<double>(T));
  out.dw.assign(net.num_farms(), std::vector<double>(T));
  out.dd.assign(net.num_loads(), std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < net.num_generators(); ++g) out.p[g][t] = sol.x[ix.p(g, t)];
    for (int n = 0; n < net.nodes; ++n) out.theta[n][t] = sol.x[ix.theta(n, t)];
    for (int m = 0; m < net.num_farms(); ++m) out.dw[m][t] = sol.x[ix.dw(m, t)];
    for (int j = 0; j < net.num_loads(); ++j) out.dd[j][t] = sol.x[ix.dd(j, t)];
  }
  out.objective = std::max(0.0, sol.objective);
  return out;
}

double balance_residual(const Network& net, const WindSeries& wind,
                        const RecourseSolution& sol) {
  double worst = 0.0;
  for (int t = 0; t < net.horizon; ++t) {
    std::vector<double> net_in(net.nodes, 0.0);
    for (int g = 0; g < net.num_generators(); ++g) net_in[net.generators[g].bus] += sol.p[g][t];
    for (int m = 0; m < net.num_farms(); ++m) {
      net_in[net.wind_farms[m].bus] += wind[m][t] - sol.dw[m][t];
    }
    for (int j = 0; j < net.num_loads(); ++j) {
      net_in[net.loads[j].bus] -= net.loads[j].demand_mw[t] - sol.dd[j][t];
    }
    for (int l = 0; l < net.num_lines(); ++l) {
      const Line& line = net.lines[l];
      const double f =
          net.flow_coefficient(l) * (sol.theta[line.from][t] - sol.theta[line.to][t]);
      net_in[line.from] -= f;
      net_in[line.to] += f;
    }
    for (double r : net_in) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double CompactRecourse::rhs(int i, const std::vector<double>& wv,
                            const std::vector<double>& v) const {
  const CompactRow& row = rows[i];
  double value = row.r;
  for (const auto& [y, c] : row.x) value -= c * v[y];
  for (const auto& [y, c] : row.p) value -= c * wv[y] * v[y];
  return value;
}

lp::LinearProgram CompactRecourse::instantiate(const std::vector<double>& wv,
                                               const std::vector<double>& v) const {
  lp::LinearProgram prog;
  for (int j = 0; j < num_vars; ++j) {
    prog.add_variable(nonneg[j] ? 0.0 : -lp::kInf, lp::kInf, cost[j]);
  }
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    prog.add_constraint(rows[i].a, rows[i].equality ? Relation::kEqual : Relation::kLessEqual,
                        rhs(i, wv, v));
  }
  return prog;
}

CompactRecourse build_compact_recourse(const Network& net, const UcSchedule& uc,
                                       const PriceSchedule& prices) {
  uc.validate(net);
  const RecourseIndex ix(net);
  const int T = net.horizon;
  CompactRecourse cr;
  cr.num_vars = ix.num_vars();
  cr.num_binaries = 2 * net.num_farms() * T;
  cr.cost.assign(cr.num_vars, 0.0);
  cr.nonneg.assign(cr.num_vars, true);
  for (int n = 0; n < net.nodes; ++n) {
    for (int t = 0; t < T; ++t) cr.nonneg[ix.theta(n, t)] = false;
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < T; ++t) cr.cost[ix.dw(m, t)] = prices.curtail[m][t];
  }
  for (int j = 0; j < net.num_loads(); ++j) {
    for (int t = 0; t < T; ++t) cr.cost[ix.dd(j, t)] = prices.shed[j][t];
  }

  auto add = [&](std::vector<Term> a, double r, std::string name,
                 bool equality = false) -> CompactRow& {
    cr.rows.push_back(CompactRow{std::move(a), r, {}, {}, std::move(name), equality});
    return cr.rows.back();
  };
  // Realized wind enters a row with coefficient kappa:
  //   kappa w = kappa w_hat + kappa (w^u - w_hat) v^u + kappa (w^l - w_hat) v^l
  auto add_wind = [&](CompactRow& row, int m, int t, double kappa) {
    const double w_hat = net.wind_farms[m].forecast_mw[t];
    row.r -= kappa * w_hat;
    for (bool upper : {true, false}) {
      const int y = wind_binary(m, t, upper, T);
      row.p.push_back({y, kappa});
      if (w_hat != 0.0) row.x.push_back({y, -kappa * w_hat});
    }
  };

  for (int g = 0; g < net.num_generators(); ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t < T; ++t) {
      const double u = uc.on[g][t];
      add({{ix.p(g, t), -1.0}}, -u * gen.pmin_mw, fmt::format("pmin_g{}_t{}", g + 1, t + 1));
      add({{ix.p(g, t), 1.0}}, u * gen.pmax_mw, fmt::format("pmax_g{}_t{}", g + 1, t + 1));
    }
  }
  for (int g = 0; g < net.num_generators(); ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t + 1 < T; ++t) {
      const double u_next = uc.on[g][t + 1];
      const double u_now = uc.on[g][t];
      add({{ix.p(g, t), 1.0}, {ix.p(g, t + 1), -1.0}},
          u_next * gen.ramp_dn_mw + (1.0 - u_next) * gen.pmax_mw,
          fmt::format("rdn_g{}_t{}", g + 1, t + 1));
      add({{ix.p(g, t + 1), 1.0}, {ix.p(g, t), -1.0}},
          u_now * gen.ramp_up_mw + (1.0 - u_now) * gen.pmax_mw,
          fmt::format("rup_g{}_t{}", g + 1, t + 1));
    }
  }
  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    const double b = net.flow_coefficient(l);
    for (int t = 0; t < T; ++t) {
      std::vector<Term> flow{{ix.theta(line.from, t), b}, {ix.theta(line.to, t), -b}};
      add(flow, line.capacity_mw, fmt::format("fmax_l{}_t{}", l + 1, t + 1));
      add(negate(flow), line.capacity_mw, fmt::format("fmin_l{}_t{}", l + 1, t + 1));
    }
  }
  for (int n = 0; n < net.nodes; ++n) {
    for (int t = 0; t < T; ++t) {
      add({{ix.theta(n, t), 1.0}}, std::numbers::pi, fmt::format("amax_n{}_t{}", n + 1, t + 1));
      add({{ix.theta(n, t), -1.0}}, std::numbers::pi, fmt::format("amin_n{}_t{}", n + 1, t + 1));
    }
  }
  for (int t = 0; t < T; ++t) {
    add({{ix.theta(net.ref_node, t), 1.0}}, 0.0, fmt::format("ref_t{}", t + 1), true);
  }
  for (int n = 0; n < net.nodes; ++n) {
    for (int t = 0; t < T; ++t) {
      CompactRow& row = add(injection_terms(net, ix, n, t), nodal_demand(net, n, t),
                            fmt::format("bal_n{}_t{}", n + 1, t + 1), true);
      for (int m = 0; m < net.num_farms(); ++m) {
        if (net.wind_farms[m].bus == n) add_wind(row, m, t, 1.0);
      }
    }
  }
  for (int j = 0; j < net.num_loads(); ++j) {
    for (int t = 0; t < T; ++t) {
      add({{ix.dd(j, t), 1.0}}, net.loads[j].demand_mw[t],
          fmt::format("shed_j{}_t{}", j + 1, t + 1));
    }
  }
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < T; ++t) {
      CompactRow& row = add({{ix.dw(m, t), 1.0}}, 0.0, fmt::format("curt_m{}_t{}", m + 1, t + 1));
      add_wind(row, m, t, -1.0);
    }
  }
  return cr;
}

}  // namespace windadm::grid
