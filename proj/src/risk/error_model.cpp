#include "windadm/risk/error_model.hpp"

#include <cmath>
#include <numbers>

#include "windadm/common/error.hpp"

namespace windadm::risk {
namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::vector<std::vector<double>> sigma_profile(double sigma, const grid::Network& net) {
  const int T = net.horizon;
  std::vector<std::vector<double>> out(net.num_farms(), std::vector<double>(T));
  for (int m = 0; m < net.num_farms(); ++m) {
    for (int t = 0; t < T; ++t) {
      out[m][t] = sigma * net.wind_farms[m].forecast_mw[t] * (1.0 + std::exp(-(T - (t + 1))));
    }
  }
  return out;
}

ErrorModel::ErrorModel(const grid::Network& net, double sigma) : scale_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kSchemaViolation, "sigma must be a finite value >= 0");
  }
  sd_ = sigma_profile(sigma, net);
  for (const auto& farm : net.wind_farms) {
    std::vector<double> lo, hi;
    for (double w : farm.forecast_mw) {
      lo.push_back(-w);
      hi.push_back(farm.capacity_mw - w);
    }
    lo_.push_back(std::move(lo));
    hi_.push_back(std::move(hi));
    forecast_.push_back(farm.forecast_mw);
    capacity_.push_back(farm.capacity_mw);
  }
}

double ErrorModel::mass(int m, int t) const {
  const double s = sd_[m][t];
  return big_phi(hi_[m][t] / s) - big_phi(lo_[m][t] / s);
}

double ErrorModel::pdf(int m, int t, double x) const {
  const double s = sd_[m][t];
  if (s <= 0.0 || x < lo_[m][t] || x > hi_[m][t]) return 0.0;
  return phi(x / s) / (s * mass(m, t));
}

double ErrorModel::cdf(int m, int t, double x) const {
  const double s = sd_[m][t];
  if (s <= 0.0) return x < 0.0 ? 0.0 : 1.0;
  if (x <= lo_[m][t]) return 0.0;
  if (x >= hi_[m][t]) return 1.0;
  return (big_phi(x / s) - big_phi(lo_[m][t] / s)) / mass(m, t);
}

double ErrorModel::inverse_cdf(int m, int t, double p) const {
  if (sd_[m][t] <= 0.0) return 0.0;
  double a = lo_[m][t];
  double b = hi_[m][t];
  if (p <= 0.0) return a;
  if (p >= 1.0) return b;
  while (b - a > 1e-10) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (cdf(m, t, mid) < p) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace windadm::risk
