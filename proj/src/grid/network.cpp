#include "windadm/grid/network.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::grid {
namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

void check_bus(const Network& net, int bus, const std::string& field) {
  if (bus < 0 || bus >= net.nodes) {
    fail(ErrorCode::kDanglingReference,
         fmt::format("{} refers to bus {} but the grid has {} nodes", field,
                     bus + 1, net.nodes));
  }
}

void check_series(const std::vector<double>& s, int horizon,
                  const std::string& field) {
  if (static_cast<int>(s.size()) != horizon) {
    fail(ErrorCode::kDimensionMismatch,
         fmt::format("{} has {} entries, expected {}", field, s.size(), horizon));
  }
  for (double v : s) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kSchemaViolation, fmt::format("{} has a non-finite entry", field));
    }
  }
}

void check_prices(const std::vector<double>& s, int horizon,
                  const std::string& field) {
  check_series(s, horizon, field);
  for (double v : s) {
    if (v < 0.0) fail(ErrorCode::kSchemaViolation, fmt::format("{} is negative", field));
  }
}

}  // namespace

std::vector<int> Network::incident_lines(int n) const {
  std::vector<int> out;
  for (int l = 0; l < num_lines(); ++l) {
    if (lines[l].from == n || lines[l].to == n) out.push_back(l);
  }
  return out;
}

double Network::total_demand(int t) const {
  double sum = 0.0;
  for (const Load& j : loads) sum += j.demand_mw[t];
  return sum;
}

void Network::validate() const {
  if (!(base_mva > 0.0) || !std::isfinite(base_mva)) {
    fail(ErrorCode::kSchemaViolation, "base_mva must be positive");
  }
  if (nodes <= 0) fail(ErrorCode::kSchemaViolation, "nodes must be positive");
  if (horizon <= 0) fail(ErrorCode::kSchemaViolation, "horizon must be positive");
  check_bus(*this, ref_node, "ref_node");
  for (int l = 0; l < num_lines(); ++l) {
    const Line& line = lines[l];
    const std::string field = fmt::format("lines[{}]", l);
    check_bus(*this, line.from, field + ".from");
    check_bus(*this, line.to, field + ".to");
    if (line.from == line.to) {
      fail(ErrorCode::kSchemaViolation, field + " connects a bus to itself");
    }
    if (!(line.capacity_mw > 0.0) || !std::isfinite(line.capacity_mw)) {
      fail(ErrorCode::kSchemaViolation, field + ".capacity_mw must be positive");
    }
    if (!(line.susceptance_pu > 0.0) || !std::isfinite(line.susceptance_pu)) {
      fail(ErrorCode::kSchemaViolation, field + ".susceptance_pu must be positive");
    }
  }
  for (int g = 0; g < num_generators(); ++g) {
    const Generator& gen = generators[g];
    const std::string field = fmt::format("generators[{}]", g);
    check_bus(*this, gen.bus, field + ".bus");
    if (!(gen.pmin_mw >= 0.0) || !std::isfinite(gen.pmax_mw) ||
        gen.pmin_mw > gen.pmax_mw) {
      fail(ErrorCode::kSchemaViolation,
           fmt::format("{} has pmin_mw {} > pmax_mw {}", field, gen.pmin_mw,
                       gen.pmax_mw));
    }
    if (!(gen.ramp_up_mw >= 0.0) || !(gen.ramp_dn_mw >= 0.0) ||
        !std::isfinite(gen.ramp_up_mw) || !std::isfinite(gen.ramp_dn_mw)) {
      fail(ErrorCode::kSchemaViolation, field + " has a negative ramp limit");
    }
    if (!std::isfinite(gen.cost_per_mwh)) {
      fail(ErrorCode::kSchemaViolation, field + ".cost_per_mwh is not finite");
    }
  }
  for (int j = 0; j < num_loads(); ++j) {
    const std::string field = fmt::format("loads[{}]", j);
    check_bus(*this, loads[j].bus, field + ".bus");
    check_series(loads[j].demand_mw, horizon, field + ".demand_mw");
    for (double d : loads[j].demand_mw) {
      if (d < 0.0) fail(ErrorCode::kSchemaViolation, field + ".demand_mw is negative");
    }
  }
  for (int m = 0; m < num_farms(); ++m) {
    const WindFarm& farm = wind_farms[m];
    const std::string field = fmt::format("wind_farms[{}]", m);
    check_bus(*this, farm.bus, field + ".bus");
    if (!(farm.capacity_mw > 0.0) || !std::isfinite(farm.capacity_mw)) {
      fail(ErrorCode::kSchemaViolation, field + ".capacity_mw must be positive");
    }
    check_series(farm.forecast_mw, horizon, field + ".forecast_mw");
    for (double w : farm.forecast_mw) {
      if (w < 0.0 || w > farm.capacity_mw) {
        fail(ErrorCode::kSchemaViolation,
             field + ".forecast_mw must lie within [0, capacity_mw]");
      }
    }
  }
}

void PriceSchedule::validate(const Network& net) const {
  if (static_cast<int>(curtail.size()) != net.num_farms()) {
    fail(ErrorCode::kDimensionMismatch,
         fmt::format("prices.curtail has {} entries, expected one per farm ({})",
                     curtail.size(), net.num_farms()));
  }
  if (static_cast<int>(shed.size()) != net.num_loads()) {
    fail(ErrorCode::kDimensionMismatch,
         fmt::format("prices.shed has {} entries, expected one per load ({})",
                     shed.size(), net.num_loads()));
  }
  for (std::size_t m = 0; m < curtail.size(); ++m) {
    check_prices(curtail[m], net.horizon, fmt::format("prices.curtail[{}]", m));
  }
  for (std::size_t j = 0; j < shed.size(); ++j) {
    check_prices(shed[j], net.horizon, fmt::format("prices.shed[{}]", j));
  }
  check_prices(reg_up, net.horizon, "prices.reg_up");
  check_prices(reg_dn, net.horizon, "prices.reg_dn");
}

double PriceSchedule::max_recourse_price() const {
  double best = 0.0;
  for (const auto& s : curtail) {
    for (double v : s) best = std::max(best, v);
  }
  for (const auto& s : shed) {
    for (double v : s) best = std::max(best, v);
  }
  return best;
}

void UcSchedule::validate(const Network& net) const {
  if (static_cast<int>(on.size()) != net.num_generators()) {
    fail(ErrorCode::kDimensionMismatch,
         fmt::format("UC schedule covers {} generators, network has {}",
                     on.size(), net.num_generators()));
  }
  for (std::size_t g = 0; g < on.size(); ++g) {
    if (static_cast<int>(on[g].size()) != net.horizon) {
      fail(ErrorCode::kDimensionMismatch,
           fmt::format("UC schedule for generator {} has {} periods, expected {}",
                       g + 1, on[g].size(), net.horizon));
    }
    for (int v : on[g]) {
      if (v != 0 && v != 1) {
        fail(ErrorCode::kSchemaViolation, "UC schedule entries must be 0 or 1");
      }
    }
  }
}

WindSeries forecast_series(const Network& net) {
  WindSeries w;
  for (const auto& farm : net.wind_farms) w.push_back(farm.forecast_mw);
  return w;
}

}  // namespace windadm::grid
