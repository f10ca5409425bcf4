#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "windadm/grid/network.hpp"
#include "windadm/risk/error_model.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::risk {

// Expected emergency-regulation cost outside a boundary. q_p prices wind
// above w^u at the upward regulation price, q_n prices wind below w^l at the
// downward one.
struct RiskValue {
  double total = 0.0;
  std::vector<std::vector<double>> q_p;  // [M][T] $
  std::vector<std::vector<double>> q_n;  // [M][T] $

  double period_total(int t) const;
};

struct QuadratureConfig {
  double tol = 1e-6;  // $ per farm-period term
  int max_depth = 48;
};

// Adaptive Simpson evaluation of
//   g^p_t * int_{w^u - w_hat}^{w_max - w_hat} (d - w^u + w_hat) y(d) dd
// + g^n_t * int_{-w_hat}^{w^l - w_hat} (w^l - w_hat - d) y(d) dd
// per farm and period. Throws kQuadratureNonconvergence with the achieved
// error when the depth limit is reached first.
RiskValue risk_exact(const uncertainty::Boundary& b, const ErrorModel& em,
                     const grid::PriceSchedule& prices, const QuadratureConfig& cfg = {});

struct MonteCarloEstimate {
  RiskValue value;
  double stderr_total = 0.0;
};

// Sample mean of the same integrand over n draws of the truncated error,
// split over `workers` threads in contiguous blocks. Worker w draws from
// mt19937_64 seeded with seed_seq{seed, w}; partial sums are reduced in
// worker order, so the result depends only on (seed, workers).
MonteCarloEstimate monte_carlo_risk(const uncertainty::Boundary& b, const ErrorModel& em,
                                    const grid::PriceSchedule& prices, std::int64_t samples,
                                    std::uint64_t seed, int workers = 1);

}  // namespace windadm::risk
