#pragma once

#include <vector>

#include "windadm/grid/network.hpp"

namespace windadm::risk {

// sigma_mt = sigma * w_hat_mt * (1 + exp(-(T - t))) with t counted from 1.
std::vector<std::vector<double>> sigma_profile(double sigma, const grid::Network& net);

// Zero-mean Gaussian forecast error per farm and period, truncated to the
// physical support [-w_hat, w_max - w_hat] and renormalized. A zero standard
// deviation is a point mass at 0.
class ErrorModel {
 public:
  ErrorModel(const grid::Network& net, double sigma);

  int farms() const { return static_cast<int>(sd_.size()); }
  int horizon() const { return sd_.empty() ? 0 : static_cast<int>(sd_[0].size()); }
  double sigma_scale() const { return scale_; }
  double sd(int m, int t) const { return sd_[m][t]; }
  double support_lo(int m, int t) const { return lo_[m][t]; }
  double support_hi(int m, int t) const { return hi_[m][t]; }
  double forecast(int m, int t) const { return forecast_[m][t]; }
  double capacity(int m) const { return capacity_[m]; }

  double pdf(int m, int t, double x) const;
  double cdf(int m, int t, double x) const;
  // Bisection on cdf to 1e-10 MW.
  double inverse_cdf(int m, int t, double p) const;

 private:
  double mass(int m, int t) const;

  double scale_;
  std::vector<std::vector<double>> sd_;
  std::vector<std::vector<double>> lo_;
  std::vector<std::vector<double>> hi_;
  std::vector<std::vector<double>> forecast_;
  std::vector<double> capacity_;
};

}  // namespace windadm::risk
