#include "windadm/uncertainty/uncertainty_set.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::uncertainty {

void Budgets::validate(int farms, int horizon) const {
  if (gamma_t < 0 || gamma_t > horizon) {
    throw Error(ErrorCode::kSchemaViolation,
                fmt::format("gamma_t = {} must lie in [0, {}]", gamma_t, horizon));
  }
  if (gamma_s < 0 || gamma_s > farms) {
    throw Error(ErrorCode::kSchemaViolation,
                fmt::format("gamma_s = {} must lie in [0, {}]", gamma_s, farms));
  }
}

bool Vertex::satisfies(const Budgets& b) const {
  for (int m = 0; m < farms; ++m) {
    int used = 0;
    for (int t = 0; t < horizon; ++t) {
      if (upper(m, t) && lower(m, t)) return false;
      used += upper(m, t) + lower(m, t);
    }
    if (used > b.gamma_t) return false;
  }
  for (int t = 0; t < horizon; ++t) {
    int used = 0;
    for (int m = 0; m < farms; ++m) used += upper(m, t) + lower(m, t);
    if (used > b.gamma_s) return false;
  }
  return true;
}

Boundary Boundary::full_width(const grid::Network& net) {
  Boundary b;
  for (const auto& farm : net.wind_farms) {
    b.upper.emplace_back(net.horizon, farm.capacity_mw);
    b.lower.emplace_back(net.horizon, 0.0);
  }
  return b;
}

Boundary Boundary::at_forecast(const grid::Network& net) {
  Boundary b;
  for (const auto& farm : net.wind_farms) {
    b.upper.push_back(farm.forecast_mw);
    b.lower.push_back(farm.forecast_mw);
  }
  return b;
}

void Boundary::validate(const grid::Network& net) const {
  const int M = net.num_farms();
  if (static_cast<int>(upper.size()) != M || static_cast<int>(lower.size()) != M) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("boundary covers {}/{} farms, network has {}", upper.size(),
                            lower.size(), M));
  }
  constexpr double kSlack = 1e-9;
  for (int m = 0; m < M; ++m) {
    if (static_cast<int>(upper[m].size()) != net.horizon ||
        static_cast<int>(lower[m].size()) != net.horizon) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("boundary for farm {} does not span {} periods", m + 1,
                              net.horizon));
    }
    const auto& farm = net.wind_farms[m];
    for (int t = 0; t < net.horizon; ++t) {
      const double fc = farm.forecast_mw[t];
      if (!(upper[m][t] >= fc - kSlack && upper[m][t] <= farm.capacity_mw + kSlack)) {
        throw Error(ErrorCode::kSchemaViolation,
                    fmt::format("upper bound {} MW for farm {} period {} is outside [{}, {}]",
                                upper[m][t], m + 1, t + 1, fc, farm.capacity_mw));
      }
      if (!(lower[m][t] >= -kSlack && lower[m][t] <= fc + kSlack)) {
        throw Error(ErrorCode::kSchemaViolation,
                    fmt::format("lower bound {} MW for farm {} period {} is outside [0, {}]",
                                lower[m][t], m + 1, t + 1, fc));
      }
    }
  }
}

std::vector<double> Boundary::indicator_values(int horizon) const {
  std::vector<double> out(2 * upper.size() * horizon);
  for (std::size_t m = 0; m < upper.size(); ++m) {
    for (int t = 0; t < horizon; ++t) {
      out[2 * (m * horizon + t)] = upper[m][t];
      out[2 * (m * horizon + t) + 1] = lower[m][t];
    }
  }
  return out;
}

bool Boundary::inside(const Boundary& other, double tol) const {
  for (std::size_t m = 0; m < upper.size(); ++m) {
    for (std::size_t t = 0; t < upper[m].size(); ++t) {
      if (upper[m][t] > other.upper[m][t] + tol) return false;
      if (lower[m][t] < other.lower[m][t] - tol) return false;
    }
  }
  return true;
}

grid::WindSeries realize_wind(const Vertex& v, const Boundary& b, const grid::Network& net) {
  if (v.farms != net.num_farms() || v.horizon != net.horizon) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("vertex is {}x{}, network is {}x{}", v.farms, v.horizon,
                            net.num_farms(), net.horizon));
  }
  b.validate(net);
  grid::WindSeries w(net.num_farms(), std::vector<double>(net.horizon));
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < net.horizon; ++t) {
      const double fc = net.wind_farms[m].forecast_mw[t];
      w[m][t] = (b.upper[m][t] - fc) * v.upper(m, t) + (b.lower[m][t] - fc) * v.lower(m, t) + fc;
    }
  }
  return w;
}

namespace {

struct Walker {
  const Budgets& budgets;
  const std::function<void(const Vertex&)>& visit;
  Vertex vertex;
  std::vector<int> farm_used;
  std::vector<int> period_used;

  void descend(int cell) {
    const int T = vertex.horizon;
    if (cell == vertex.farms * T) {
      visit(vertex);
      return;
    }
    const int m = cell / T;
    const int t = cell % T;
    descend(cell + 1);
    if (farm_used[m] >= budgets.gamma_t || period_used[t] >= budgets.gamma_s) return;
    ++farm_used[m];
    ++period_used[t];
    // (0,1) sorts before (1,0).
    vertex.set_lower(m, t, true);
    descend(cell + 1);
    vertex.set_lower(m, t, false);
    vertex.set_upper(m, t, true);
    descend(cell + 1);
    vertex.set_upper(m, t, false);
    --farm_used[m];
    --period_used[t];
  }
};

}  // namespace

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Sign patterns of length n with at most k nonzeros: sum_i C(n, i) 2^i.
std::uint64_t bounded_patterns(int n, int k) {
  long double total = 0.0L, term = 1.0L;  // term = C(n, i) 2^i
  for (int i = 0; i <= std::min(n, k); ++i) {
    total += term;
    term = term * 2.0L * (n - i) / (i + 1);
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  return total >= static_cast<long double>(kMax) ? kMax
                                                 : static_cast<std::uint64_t>(total + 0.5L);
}

}  // namespace

std::uint64_t vertex_count_bound(int farms, int horizon, const Budgets& budgets) {
  std::uint64_t by_farm = 1, by_period = 1;
  for (int m = 0; m < farms; ++m) {
    by_farm = saturating_mul(by_farm, bounded_patterns(horizon, budgets.gamma_t));
  }
  for (int t = 0; t < horizon; ++t) {
    by_period = saturating_mul(by_period, bounded_patterns(farms, budgets.gamma_s));
  }
  return std::min(by_farm, by_period);
}

void enumerate_vertices(int farms, int horizon, const Budgets& budgets,
                        const std::function<void(const Vertex&)>& visit, std::uint64_t cap) {
  budgets.validate(farms, horizon);
  const std::uint64_t bound = vertex_count_bound(farms, horizon, budgets);
  if (bound > cap) {
    throw Error(ErrorCode::kCapExceeded,
                bound == std::numeric_limits<std::uint64_t>::max()
                    ? fmt::format("more than 2^64 budgeted vertices (of 3^{} sign patterns) "
                                  "exceed the cap of {}",
                                  farms * horizon, cap)
                    : fmt::format("up to {} budgeted vertices (of 3^{} sign patterns) exceed "
                                  "the cap of {}",
                                  bound, farms * horizon, cap));
  }
  Walker walker{budgets, visit, Vertex(farms, horizon), std::vector<int>(farms, 0),
                std::vector<int>(horizon, 0)};
  walker.descend(0);
}

std::vector<Vertex> all_vertices(int farms, int horizon, const Budgets& budgets,
                                 std::uint64_t cap) {
  std::vector<Vertex> out;
  enumerate_vertices(farms, horizon, budgets, [&](const Vertex& v) { out.push_back(v); }, cap);
  return out;
}

}  // namespace windadm::uncertainty
