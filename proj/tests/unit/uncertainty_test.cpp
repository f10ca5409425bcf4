#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "support/fixture.hpp"
#include "windadm/common/error.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::uncertainty {
namespace {

// Every 0/1 assignment of the 2MT indicators, kept when it meets the budgets.
std::vector<std::vector<std::uint8_t>> brute_force(int farms, int horizon, const Budgets& b) {
  const int n = 2 * farms * horizon;
  std::vector<std::vector<std::uint8_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Vertex v(farms, horizon);
    // Bit n-1-i is indicator i so increasing masks are lexicographic.
    for (int i = 0; i < n; ++i) v.v[i] = (mask >> (n - 1 - i)) & 1u;
    bool ok = true;
    for (int m = 0; m < farms; ++m) {
      int used = 0;
      for (int t = 0; t < horizon; ++t) {
        const int u = v.v[2 * (m * horizon + t)], l = v.v[2 * (m * horizon + t) + 1];
        if (u + l > 1) ok = false;
        used += u + l;
      }
      if (used > b.gamma_t) ok = false;
    }
    for (int t = 0; t < horizon; ++t) {
      int used = 0;
      for (int m = 0; m < farms; ++m) {
        used += v.v[2 * (m * horizon + t)] + v.v[2 * (m * horizon + t) + 1];
      }
      if (used > b.gamma_s) ok = false;
    }
    if (ok) out.push_back(v.v);
  }
  return out;
}

TEST(Vertices, SingleFarmTwoPeriods) {
  EXPECT_EQ(all_vertices(1, 2, {1, 1}).size(), 5u);
}

TEST(Vertices, EmptyTimeBudget) {
  const auto vs = all_vertices(2, 3, {0, 2});
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_TRUE(std::all_of(vs[0].v.begin(), vs[0].v.end(), [](auto x) { return x == 0; }));
}

TEST(Vertices, TwoFarmsOnePeriod) {
  EXPECT_EQ(all_vertices(2, 1, {1, 1}).size(), 5u);
}

TEST(Vertices, MatchBruteForceInOrder) {
  for (int farms = 1; farms <= 2; ++farms) {
    for (int horizon = 1; horizon <= 3; ++horizon) {
      for (int gt = 0; gt <= horizon; ++gt) {
        for (int gs = 0; gs <= farms; ++gs) {
          const Budgets b{gt, gs};
          const auto expected = brute_force(farms, horizon, b);
          const auto got = all_vertices(farms, horizon, b);
          ASSERT_EQ(got.size(), expected.size()) << farms << "x" << horizon;
          for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].v, expected[i]);
            EXPECT_TRUE(got[i].satisfies(b));
          }
        }
      }
    }
  }
}

TEST(Vertices, CapExceeded) {
  try {
    all_vertices(1, 24, {8, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
    EXPECT_NE(std::string(e.what()).find("3^24"), std::string::npos);
  }
  EXPECT_NO_THROW(all_vertices(1, 12, {2, 1}));
  // Budget pruning keeps long horizons enumerable: 1 + 2*24 + 4*C(24,2).
  EXPECT_EQ(all_vertices(1, 24, {2, 1}).size(), 1153u);
}

TEST(Vertices, CountBoundIsExactForOneFarmAndUpperOtherwise) {
  for (int T = 1; T <= 6; ++T) {
    for (int g = 0; g <= T; ++g) {
      EXPECT_EQ(vertex_count_bound(1, T, {g, 1}), all_vertices(1, T, {g, 1}).size());
    }
  }
  for (int gt = 0; gt <= 3; ++gt) {
    for (int gs = 0; gs <= 2; ++gs) {
      EXPECT_GE(vertex_count_bound(2, 3, {gt, gs}), all_vertices(2, 3, {gt, gs}).size());
    }
  }
  EXPECT_EQ(vertex_count_bound(3, 40, {40, 3}), std::numeric_limits<std::uint64_t>::max());
}

TEST(Vertices, BudgetOutOfRange) {
  EXPECT_THROW(all_vertices(1, 3, {4, 1}), Error);
  EXPECT_THROW(all_vertices(1, 3, {1, 2}), Error);
}

TEST(Realize, SubstitutesBounds) {
  const auto c = testing::fixture_case();
  const auto& net = c.network;
  Boundary b = Boundary::full_width(net);
  b.upper[0][3] = 150.0;
  b.lower[0][4] = 10.0;
  Vertex v(1, net.horizon);
  EXPECT_EQ(realize_wind(v, b, net)[0], net.wind_farms[0].forecast_mw);
  v.set_upper(0, 3, true);
  v.set_lower(0, 4, true);
  const auto w = realize_wind(v, b, net);
  EXPECT_DOUBLE_EQ(w[0][3], 150.0);
  EXPECT_DOUBLE_EQ(w[0][4], 10.0);
  EXPECT_DOUBLE_EQ(w[0][5], net.wind_farms[0].forecast_mw[5]);
}

TEST(Realize, StaysInsideBoundaryAndSupport) {
  const auto c = testing::fixture_case();
  const auto& net = c.network;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Boundary degenerate = Boundary::at_forecast(net);
  for (int trial = 0; trial < 50; ++trial) {
    Boundary b = Boundary::full_width(net);
    for (int t = 0; t < net.horizon; ++t) {
      const double fc = net.wind_farms[0].forecast_mw[t];
      b.upper[0][t] = fc + unit(rng) * (250.0 - fc);
      b.lower[0][t] = unit(rng) * fc;
    }
    Vertex v(1, net.horizon);
    for (int t = 0; t < net.horizon; ++t) {
      const double r = unit(rng);
      if (r < 0.3) v.set_upper(0, t, true);
      else if (r < 0.6) v.set_lower(0, t, true);
    }
    const auto w = realize_wind(v, b, net);
    const auto flat = realize_wind(v, degenerate, net);
    for (int t = 0; t < net.horizon; ++t) {
      const double fc = net.wind_farms[0].forecast_mw[t];
      auto near = [&](double x) { return std::abs(w[0][t] - x) <= 1e-12 * 250.0; };
      EXPECT_TRUE(near(b.upper[0][t]) || near(b.lower[0][t]) || near(fc));
      EXPECT_GE(w[0][t], 0.0);
      EXPECT_LE(w[0][t], 250.0);
      EXPECT_DOUBLE_EQ(flat[0][t], fc);
    }
  }
}

TEST(Realize, RejectsBadBoundary) {
  const auto c = testing::fixture_case();
  Boundary b = Boundary::full_width(c.network);
  b.lower[0][0] = c.network.wind_farms[0].forecast_mw[0] + 5.0;
  EXPECT_THROW(realize_wind(Vertex(1, c.network.horizon), b, c.network), Error);
  EXPECT_THROW(realize_wind(Vertex(1, 3), Boundary::full_width(c.network), c.network), Error);
}

}  // namespace
}  // namespace windadm::uncertainty
