#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "windadm/common/error.hpp"
#include "windadm/grid/case_io.hpp"
#include "windadm/grid/recourse.hpp"
#include "windadm/lp/solver.hpp"

#ifndef WINDADM_DATA_DIR
#define WINDADM_DATA_DIR "data"
#endif

namespace windadm::grid {
namespace {

// One generator at bus 1, one load at bus 2, a strong line between them.
Case two_bus(double gen_cap, double demand, int horizon = 1) {
  Case c;
  Network& net = c.network;
  net.nodes = 2;
  net.ref_node = 0;
  net.horizon = horizon;
  net.lines.push_back(Line{0, 1, 10.0, 1000.0});
  net.generators.push_back(Generator{0, 0.0, gen_cap, gen_cap, gen_cap, 10.0});
  net.loads.push_back(Load{1, std::vector<double>(horizon, demand)});
  c.prices.shed = {std::vector<double>(horizon, 500.0)};
  c.prices.reg_up.assign(horizon, 0.0);
  c.prices.reg_dn.assign(horizon, 0.0);
  net.validate();
  c.prices.validate(net);
  return c;
}

UcSchedule all_on(const Network& net, int value = 1) {
  UcSchedule uc;
  uc.on.assign(net.num_generators(), std::vector<int>(net.horizon, value));
  return uc;
}

Case fixture() { return load_case_file(std::string(WINDADM_DATA_DIR) + "/case9.json"); }

TEST(TwoBus, AmpleCapacityNeedsNoRecourse) {
  Case c = two_bus(100.0, 80.0);
  const auto sol = evaluate_scenario(c.network, all_on(c.network), c.prices, {});
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  EXPECT_NEAR(sol.p[0][0], 80.0, 1e-7);
  EXPECT_NEAR(sol.dd[0][0], 0.0, 1e-9);
}

TEST(TwoBus, ShortfallIsShed) {
  Case c = two_bus(60.0, 80.0);
  const auto sol = evaluate_scenario(c.network, all_on(c.network), c.prices, {});
  EXPECT_NEAR(sol.objective, 20.0 * 500.0, 1e-6);
  EXPECT_NEAR(sol.dd[0][0], 20.0, 1e-7);
  EXPECT_LE(balance_residual(c.network, {}, sol), 1e-6);
}

TEST(TwoBus, ThinLineForcesShedding) {
  Case c = two_bus(100.0, 80.0);
  c.network.lines[0].capacity_mw = 50.0;
  const auto sol = evaluate_scenario(c.network, all_on(c.network), c.prices, {});
  EXPECT_NEAR(sol.dd[0][0], 30.0, 1e-7);
  EXPECT_NEAR(sol.objective, 30.0 * 500.0, 1e-6);
}

TEST(TwoBus, ExcessWindIsCurtailed) {
  Case c = two_bus(100.0, 80.0);
  c.network.generators[0].pmin_mw = 40.0;
  c.network.wind_farms.push_back(WindFarm{1, 200.0, {50.0}});
  c.prices.curtail = {{30.0}};
  // pmin 40 + wind 50 against load 80: 10 MW must be curtailed.
  const auto sol = evaluate_scenario(c.network, all_on(c.network), c.prices, {{50.0}});
  EXPECT_NEAR(sol.dw[0][0], 10.0, 1e-7);
  EXPECT_NEAR(sol.objective, 300.0, 1e-6);
}

TEST(Recourse, FixtureTallyMatchesClosedForm) {
  Case c = fixture();
  const auto& net = c.network;
  EXPECT_EQ(net.num_generators(), 3);
  EXPECT_EQ(net.num_lines(), 9);
  ASSERT_EQ(net.num_farms(), 1);
  EXPECT_DOUBLE_EQ(net.wind_farms[0].capacity_mw, 250.0);
  EXPECT_EQ(net.wind_farms[0].bus, 0);
  EXPECT_EQ(net.horizon, 24);

  const auto prog = assemble_recourse_lp(net, all_on(net), c.prices, forecast_series(net));
  // (3 + 9 + 1 + 3) * 24 columns;
  // 2*3*24 + 2*3*23 + 2*9*24 + 24 + 9*24 rows.
  EXPECT_EQ(prog.num_variables(), 16 * 24);
  EXPECT_EQ(prog.num_constraints(), 144 + 138 + 432 + 24 + 216);
  const auto tally = recourse_tally(net);
  EXPECT_EQ(tally.columns, prog.num_variables());
  EXPECT_EQ(tally.rows, prog.num_constraints());
}

TEST(Recourse, OffUnitsProduceNothing) {
  Case c = fixture();
  const auto& net = c.network;
  const auto sol = evaluate_scenario(net, all_on(net, 0), c.prices, forecast_series(net));
  for (const auto& row : sol.p) {
    for (double p : row) EXPECT_NEAR(p, 0.0, 1e-7);
  }
  EXPECT_GT(sol.objective, 0.0);
}

TEST(Recourse, ShutdownRampRowIsRelaxedToPmax) {
  Case c = fixture();
  const auto& net = c.network;
  UcSchedule uc = all_on(net);
  uc.on[1][5] = 0;  // generator 2 shuts down in period 6
  const auto prog = assemble_recourse_lp(net, uc, c.prices, forecast_series(net));
  const RecourseIndex ix(net);
  bool found = false;
  for (const auto& row : prog.constraints()) {
    if (row.terms.size() == 2 && row.terms[0].var == ix.p(1, 4) && row.terms[0].coef == 1.0 &&
        row.terms[1].var == ix.p(1, 5) && row.terms[1].coef == -1.0) {
      EXPECT_DOUBLE_EQ(row.rhs, net.generators[1].pmax_mw);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Recourse, RejectsWrongWindShape) {
  Case c = fixture();
  const auto& net = c.network;
  try {
    assemble_recourse_lp(net, all_on(net), c.prices, {std::vector<double>(23, 0.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Recourse, FixtureDispatchIsBalancedAndMonotone) {
  Case c = fixture();
  Network net = c.network;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    WindSeries wind = forecast_series(net);
    for (double& w : wind[0]) w = unit(rng) * net.wind_farms[0].capacity_mw;
    const auto base = evaluate_scenario(net, all_on(net), c.prices, wind);
    EXPECT_GE(base.objective, 0.0);
    EXPECT_LE(balance_residual(net, wind, base), 1e-6);
    const bool no_recourse = base.objective < 1e-9;
    double moved = 0.0;
    for (const auto& r : base.dw) for (double v : r) moved += v;
    for (const auto& r : base.dd) for (double v : r) moved += v;
    EXPECT_EQ(no_recourse, moved < 1e-7);

    Network wider = net;
    for (auto& l : wider.lines) l.capacity_mw *= 1.5;
    for (auto& g : wider.generators) g.pmax_mw += 20.0;
    const auto relaxed = evaluate_scenario(wider, all_on(net), c.prices, wind);
    EXPECT_LE(relaxed.objective, base.objective + 1e-6 * (1.0 + base.objective));
  }
}

// The compact all-<= form must reproduce the natural LP at any vertex.
TEST(Recourse, CompactFormMatchesNaturalForm) {
  Case c = fixture();
  const auto& net = c.network;
  const auto uc = all_on(net);
  const auto cr = build_compact_recourse(net, uc, c.prices);
  const int T = net.horizon;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> wv(cr.num_binaries), v(cr.num_binaries, 0.0);
    WindSeries wind = forecast_series(net);
    for (int t = 0; t < T; ++t) {
      const double fc = net.wind_farms[0].forecast_mw[t];
      const double up = fc + unit(rng) * (250.0 - fc);
      const double lo = unit(rng) * fc;
      wv[wind_binary(0, t, true, T)] = up;
      wv[wind_binary(0, t, false, T)] = lo;
      const double pick = unit(rng);
      if (pick < 0.3) {
        v[wind_binary(0, t, true, T)] = 1.0;
        wind[0][t] = up;
      } else if (pick < 0.6) {
        v[wind_binary(0, t, false, T)] = 1.0;
        wind[0][t] = lo;
      }
    }
    const auto natural = evaluate_scenario(net, uc, c.prices, wind);
    const auto compact = lp::solve_lp(cr.instantiate(wv, v));
    ASSERT_EQ(compact.status, lp::LpStatus::kOptimal);
    EXPECT_NEAR(compact.objective, natural.objective, 1e-6 * (1.0 + natural.objective));
  }
}

TEST(CaseIo, DanglingLineEndpoint) {
  auto doc = case_to_json(fixture());
  doc["lines"][0]["to"] = 99;
  try {
    load_case(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
    EXPECT_NE(std::string(e.what()).find("lines[0].to"), std::string::npos);
  }
}

TEST(CaseIo, InvertedGeneratorBounds) {
  auto doc = case_to_json(fixture());
  doc["generators"][2]["pmin_mw"] = 500.0;
  try {
    load_case(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
    EXPECT_NE(std::string(e.what()).find("generators[2]"), std::string::npos);
  }
}

TEST(CaseIo, ShortDemandSeries) {
  auto doc = case_to_json(fixture());
  doc["loads"][1]["demand_mw"].erase(0);
  try {
    load_case(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(CaseIo, ScalarPricesExpand) {
  auto doc = case_to_json(fixture());
  doc["prices"]["curtail"][0] = 45.0;
  const Case c = load_case(doc);
  ASSERT_EQ(c.prices.curtail[0].size(), 24u);
  EXPECT_DOUBLE_EQ(c.prices.curtail[0][23], 45.0);
}

TEST(CaseIo, JsonRoundTrip) {
  const Case c = fixture();
  const auto doc = case_to_json(c);
  EXPECT_EQ(case_to_json(load_case(doc)), doc);
}

TEST(CaseIo, UcCsvRoundTrip) {
  const Case c = fixture();
  UcSchedule uc = all_on(c.network);
  uc.on[2][0] = 0;
  uc.on[1][23] = 0;
  std::stringstream buf;
  write_uc_csv(buf, uc);
  const auto back = read_uc_csv(buf, c.network);
  EXPECT_EQ(back.on, uc.on);
}

TEST(CaseIo, UcCsvMissingPair) {
  const Case c = fixture();
  std::stringstream buf("period,generator,on\n1,1,1\n");
  EXPECT_THROW(read_uc_csv(buf, c.network), Error);
}

}  // namespace
}  // namespace windadm::grid
