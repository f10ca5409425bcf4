#pragma once

#include <optional>
#include <vector>

namespace windadm::grid {

// Node indices are 0-based in memory; case and CSV files use 1-based bus and
// generator numbers.

struct Line {
  int from = 0;
  int to = 0;
  double susceptance_pu = 0.0;
  double capacity_mw = 0.0;
};

struct Generator {
  int bus = 0;
  double pmin_mw = 0.0;
  double pmax_mw = 0.0;
  double ramp_up_mw = 0.0;  // per period
  double ramp_dn_mw = 0.0;
  double cost_per_mwh = 0.0;
};

struct Load {
  int bus = 0;
  std::vector<double> demand_mw;  // [T]
};

struct WindFarm {
  int bus = 0;
  double capacity_mw = 0.0;
  std::vector<double> forecast_mw;  // [T]
};

struct Network {
  double base_mva = 100.0;
  int nodes = 0;
  int ref_node = 0;
  int horizon = 0;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<WindFarm> wind_farms;

  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_loads() const { return static_cast<int>(loads.size()); }
  int num_farms() const { return static_cast<int>(wind_farms.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }

  // MW flow per radian of angle difference on line l.
  double flow_coefficient(int l) const {
    return base_mva * lines[l].susceptance_pu;
  }
  // Lines incident to node n (the adjacency set used in the balance rows).
  std::vector<int> incident_lines(int n) const;
  double total_demand(int t) const;

  // Throws Error(kSchemaViolation / kDanglingReference / kDimensionMismatch)
  // naming the offending field.
  void validate() const;
};

struct PriceSchedule {
  std::vector<std::vector<double>> curtail;  // [M][T] $/MWh
  std::vector<std::vector<double>> shed;     // [J][T] $/MWh
  std::vector<double> reg_up;                // [T] $/MWh
  std::vector<double> reg_dn;                // [T] $/MWh

  void validate(const Network& net) const;
  double max_recourse_price() const;
};

struct UcSchedule {
  std::vector<std::vector<int>> on;  // [G][T], 0 or 1
  std::optional<double> reserve_rate;

  void validate(const Network& net) const;
  bool is_on(int g, int t) const { return on[g][t] != 0; }
};

// Wind realization per farm and period, [M][T] MW.
using WindSeries = std::vector<std::vector<double>>;

WindSeries forecast_series(const Network& net);

}  // namespace windadm::grid
