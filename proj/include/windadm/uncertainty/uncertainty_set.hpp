#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "windadm/grid/network.hpp"

namespace windadm::uncertainty {

struct Budgets {
  int gamma_t = 0;  // deviating periods per farm
  int gamma_s = 0;  // deviating farms per period
  // Confidence levels the budgets were chosen for; metadata only.
  double beta_t = 0.0;
  double beta_s = 0.0;

  // Throws kSchemaViolation unless 0 <= gamma_t <= T and 0 <= gamma_s <= M.
  void validate(int farms, int horizon) const;
};

// Indicators flattened with grid::wind_binary: entry 2*(m*T+t) is v^u_mt,
// entry 2*(m*T+t)+1 is v^l_mt.
struct Vertex {
  int farms = 0;
  int horizon = 0;
  std::vector<std::uint8_t> v;

  Vertex() = default;
  Vertex(int m, int t) : farms(m), horizon(t), v(2 * m * t, 0) {}

  bool upper(int m, int t) const { return v[2 * (m * horizon + t)] != 0; }
  bool lower(int m, int t) const { return v[2 * (m * horizon + t) + 1] != 0; }
  void set_upper(int m, int t, bool on) { v[2 * (m * horizon + t)] = on; }
  void set_lower(int m, int t, bool on) { v[2 * (m * horizon + t) + 1] = on; }

  bool satisfies(const Budgets& b) const;
  std::vector<double> as_doubles() const { return {v.begin(), v.end()}; }
};

struct Boundary {
  std::vector<std::vector<double>> upper;  // [M][T] MW
  std::vector<std::vector<double>> lower;  // [M][T] MW

  // Widest boundary: [0, capacity] everywhere.
  static Boundary full_width(const grid::Network& net);
  // Degenerate boundary at the forecast.
  static Boundary at_forecast(const grid::Network& net);

  // Throws kDimensionMismatch on shape errors and kSchemaViolation when
  // lower <= forecast <= upper <= capacity fails beyond 1e-9 MW.
  void validate(const grid::Network& net) const;
  // Boundary value per indicator in wind_binary order.
  std::vector<double> indicator_values(int horizon) const;
  // True when every interval of *this lies inside the matching one of other.
  bool inside(const Boundary& other, double tol = 1e-9) const;
};

// w = (w^u - w_hat) v^u + (w^l - w_hat) v^l + w_hat, per farm and period.
grid::WindSeries realize_wind(const Vertex& v, const Boundary& b, const grid::Network& net);

inline constexpr std::uint64_t kDefaultVertexCap = std::uint64_t{1} << 20;

// Upper bound on the number of vertices satisfying the budgets: the smaller
// of the per-farm and per-period products of sum_i C(n, i) 2^i. Exact when
// either budget alone is binding (e.g. M = 1). Saturates at 2^64 - 1.
std::uint64_t vertex_count_bound(int farms, int horizon, const Budgets& budgets);

// Calls `visit` for every vertex satisfying the budgets, in lexicographic
// order of the flattened indicator vector (all-zero first). The walk prunes
// by budget, so its cost is the budgeted count, not 3^(M*T). Throws
// kCapExceeded when vertex_count_bound exceeds `cap`; the message carries
// that bound.
void enumerate_vertices(int farms, int horizon, const Budgets& budgets,
                        const std::function<void(const Vertex&)>& visit,
                        std::uint64_t cap = kDefaultVertexCap);
std::vector<Vertex> all_vertices(int farms, int horizon, const Budgets& budgets,
                                 std::uint64_t cap = kDefaultVertexCap);

}  // namespace windadm::uncertainty
