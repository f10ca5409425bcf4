#include "windadm/scuc/scuc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::scuc {

using lp::Relation;
using lp::Term;

ScucResult solve_scuc(const grid::Network& net, const ScucConfig& cfg) {
  net.validate();
  if (!(cfg.reserve_rate >= 0.0) || !std::isfinite(cfg.reserve_rate)) {
    throw Error(ErrorCode::kSchemaViolation, "reserve rate must be >= 0");
  }
  const int G = net.num_generators();
  const int N = net.nodes;
  const int T = net.horizon;

  lp::MilpProblem milp;
  auto& prog = milp.lp();
  std::vector<std::vector<int>> u(G, std::vector<int>(T));
  std::vector<std::vector<int>> p(G, std::vector<int>(T));
  std::vector<std::vector<int>> theta(N, std::vector<int>(T));
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) {
      u[g][t] = milp.add_binary(0.0, fmt::format("u_g{}_t{}", g + 1, t + 1));
      p[g][t] = prog.add_variable(0.0, lp::kInf, net.generators[g].cost_per_mwh,
                                  fmt::format("p_g{}_t{}", g + 1, t + 1));
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int t = 0; t < T; ++t) {
      theta[n][t] = prog.add_variable(-std::numbers::pi, std::numbers::pi, 0.0);
    }
  }

  for (int g = 0; g < G; ++g) {
    const grid::Generator& gen = net.generators[g];
    for (int t = 0; t < T; ++t) {
      prog.add_constraint({{p[g][t], 1.0}, {u[g][t], -gen.pmin_mw}}, Relation::kGreaterEqual, 0.0);
      prog.add_constraint({{p[g][t], 1.0}, {u[g][t], -gen.pmax_mw}}, Relation::kLessEqual, 0.0);
    }
    // Ramp limits relax to Pmax across a shutdown (down) or start-up (up).
    for (int t = 0; t + 1 < T; ++t) {
      prog.add_constraint({{p[g][t], 1.0}, {p[g][t + 1], -1.0},
                           {u[g][t + 1], gen.pmax_mw - gen.ramp_dn_mw}},
                          Relation::kLessEqual, gen.pmax_mw);
      prog.add_constraint({{p[g][t + 1], 1.0}, {p[g][t], -1.0},
                           {u[g][t], gen.pmax_mw - gen.ramp_up_mw}},
                          Relation::kLessEqual, gen.pmax_mw);
    }
  }
  for (int l = 0; l < net.num_lines(); ++l) {
    const grid::Line& line = net.lines[l];
    const double b = net.flow_coefficient(l);
    for (int t = 0; t < T; ++t) {
      std::vector<Term> flow{{theta[line.from][t], b}, {theta[line.to][t], -b}};
      prog.add_constraint(flow, Relation::kLessEqual, line.capacity_mw);
      prog.add_constraint(flow, Relation::kGreaterEqual, -line.capacity_mw);
    }
  }
  for (int t = 0; t < T; ++t) {
    prog.add_constraint({{theta[net.ref_node][t], 1.0}}, Relation::kEqual, 0.0);
  }
  for (int n = 0; n < N; ++n) {
    for (int t = 0; t < T; ++t) {
      std::vector<Term> terms;
      for (int g = 0; g < G; ++g) {
        if (net.generators[g].bus == n) terms.push_back({p[g][t], 1.0});
      }
      for (int l : net.incident_lines(n)) {
        const grid::Line& line = net.lines[l];
        const int other = line.from == n ? line.to : line.from;
        const double b = net.flow_coefficient(l);
        terms.push_back({theta[n][t], -b});
        terms.push_back({theta[other][t], b});
      }
      double rhs = 0.0;
      for (const grid::Load& j : net.loads) {
        if (j.bus == n) rhs += j.demand_mw[t];
      }
      for (const grid::WindFarm& m : net.wind_farms) {
        if (m.bus == n) rhs -= m.forecast_mw[t];
      }
      prog.add_constraint(std::move(terms), Relation::kEqual, rhs,
                          fmt::format("bal_n{}_t{}", n + 1, t + 1));
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> headroom;
    for (int g = 0; g < G; ++g) {
      headroom.push_back({u[g][t], net.generators[g].pmax_mw});
      headroom.push_back({p[g][t], -1.0});
    }
    prog.add_constraint(std::move(headroom), Relation::kGreaterEqual,
                        cfg.reserve_rate * net.total_demand(t),
                        fmt::format("reserve_t{}", t + 1));
  }

  const auto res = lp::solve_milp(milp, cfg.tolerances, cfg.node_limit);
  if (res.status == lp::MilpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible,
                fmt::format("no commitment covers load plus {:.1f}% reserve",
                            100.0 * cfg.reserve_rate));
  }
  if (!res.has_incumbent) {
    throw Error(ErrorCode::kIterationCap,
                fmt::format("unit commitment stopped at {} nodes without a schedule", res.nodes));
  }
  if (res.status == lp::MilpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericBreakdown, "unit commitment relaxation is unbounded");
  }

  ScucResult out;
  out.cost = res.objective;
  out.nodes = res.nodes;
  out.uc.reserve_rate = cfg.reserve_rate;
  out.uc.on.assign(G, std::vector<int>(T));
  out.p.assign(G, std::vector<double>(T));
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) {
      out.uc.on[g][t] = res.x[u[g][t]] > 0.5 ? 1 : 0;
      out.p[g][t] = res.x[p[g][t]];
    }
  }
  return out;
}

double reserve_shortfall(const grid::Network& net, const grid::UcSchedule& uc,
                         const std::vector<std::vector<double>>& p, double reserve_rate) {
  double worst = 0.0;
  for (int t = 0; t < net.horizon; ++t) {
    double headroom = 0.0;
    for (int g = 0; g < net.num_generators(); ++g) {
      headroom += uc.on[g][t] * net.generators[g].pmax_mw - p[g][t];
    }
    worst = std::max(worst, reserve_rate * net.total_demand(t) - headroom);
  }
  return worst;
}

}  // namespace windadm::scuc
