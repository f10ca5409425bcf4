#pragma once

#include <string>

#include "windadm/grid/case_io.hpp"

#ifndef WINDADM_DATA_DIR
#define WINDADM_DATA_DIR "data"
#endif

namespace windadm::testing {

inline grid::Case fixture_case() {
  return grid::load_case_file(std::string(WINDADM_DATA_DIR) + "/case9.json");
}

inline grid::UcSchedule all_on(const grid::Network& net, int value = 1) {
  grid::UcSchedule uc;
  uc.on.assign(net.num_generators(), std::vector<int>(net.horizon, value));
  return uc;
}

// Keeps the first `horizon` periods of every series.
inline grid::Case truncate_horizon(grid::Case c, int horizon) {
  auto cut = [&](std::vector<double>& v) { v.resize(horizon); };
  c.network.horizon = horizon;
  for (auto& j : c.network.loads) cut(j.demand_mw);
  for (auto& m : c.network.wind_farms) cut(m.forecast_mw);
  for (auto& s : c.prices.curtail) cut(s);
  for (auto& s : c.prices.shed) cut(s);
  cut(c.prices.reg_up);
  cut(c.prices.reg_dn);
  return c;
}

}  // namespace windadm::testing
