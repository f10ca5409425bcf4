#include "windadm/risk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::risk {

double RiskValue::period_total(int t) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < q_p.size(); ++m) sum += q_p[m][t] + q_n[m][t];
  return sum;
}

namespace {

// Tail mass beyond this many standard deviations underflows to zero.
constexpr double kSpan = 40.0;

struct Simpson {
  int max_depth;
  double worst_error = 0.0;
  bool converged = true;

  template <class F>
  double run(const F& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return step(f, a, b, fa, fm, fb, whole, tol, 0);
  }

  template <class F>
  double step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
              double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth >= max_depth) {
      converged = false;
      worst_error = std::max(worst_error, std::abs(err) / 15.0);
      return left + right + err / 15.0;
    }
    return step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

// int_a^b h over pieces cut at integer multiples of s.
template <class F>
double integrate_split(Simpson& simpson, const F& h, double a, double b, double s, double tol) {
  a = std::max(a, -kSpan * s);
  b = std::min(b, kSpan * s);
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double k = std::floor(a / s) + 1.0; k * s < b; k += 1.0) cuts.push_back(k * s);
  cuts.push_back(b);
  const double per_piece = tol / static_cast<double>(cuts.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += simpson.run(h, cuts[i], cuts[i + 1], per_piece);
  }
  return sum;
}

RiskValue zero_value(int farms, int horizon) {
  RiskValue v;
  v.q_p.assign(farms, std::vector<double>(horizon, 0.0));
  v.q_n.assign(farms, std::vector<double>(horizon, 0.0));
  return v;
}

void check_dims(const uncertainty::Boundary& b, const ErrorModel& em,
                const grid::PriceSchedule& prices) {
  bool ok = static_cast<int>(b.upper.size()) == em.farms() &&
            static_cast<int>(b.lower.size()) == em.farms() &&
            static_cast<int>(prices.reg_up.size()) == em.horizon() &&
            static_cast<int>(prices.reg_dn.size()) == em.horizon();
  for (int m = 0; ok && m < em.farms(); ++m) {
    ok = static_cast<int>(b.upper[m].size()) == em.horizon() &&
         static_cast<int>(b.lower[m].size()) == em.horizon();
  }
  if (!ok) {
    throw Error(ErrorCode::kDimensionMismatch,
                "boundary, error model and regulation prices disagree on farms or periods");
  }
}

}  // namespace

RiskValue risk_exact(const uncertainty::Boundary& b, const ErrorModel& em,
                     const grid::PriceSchedule& prices, const QuadratureConfig& cfg) {
  check_dims(b, em, prices);
  RiskValue out = zero_value(em.farms(), em.horizon());
  Simpson simpson{cfg.max_depth};
  for (int m = 0; m < em.farms(); ++m) {
    for (int t = 0; t < em.horizon(); ++t) {
      const double s = em.sd(m, t);
      if (s <= 0.0) continue;
      const double fc = em.forecast(m, t);
      const double gp = prices.reg_up[t];
      const double gn = prices.reg_dn[t];
      const double xu = b.upper[m][t] - fc;
      const double xl = b.lower[m][t] - fc;
      if (gp > 0.0) {
        auto h = [&](double d) { return (d - xu) * em.pdf(m, t, d); };
        out.q_p[m][t] = gp * integrate_split(simpson, h, xu, em.support_hi(m, t), s, cfg.tol / gp);
      }
      if (gn > 0.0) {
        auto h = [&](double d) { return (xl - d) * em.pdf(m, t, d); };
        out.q_n[m][t] = gn * integrate_split(simpson, h, em.support_lo(m, t), xl, s, cfg.tol / gn);
      }
      out.q_p[m][t] = std::max(0.0, out.q_p[m][t]);
      out.q_n[m][t] = std::max(0.0, out.q_n[m][t]);
      out.total += out.q_p[m][t] + out.q_n[m][t];
    }
  }
  if (!simpson.converged) {
    throw Error(ErrorCode::kQuadratureNonconvergence,
                fmt::format("depth limit {} reached with local error {:.3e} (requested {:.3e})",
                            cfg.max_depth, simpson.worst_error, cfg.tol));
  }
  return out;
}

MonteCarloEstimate monte_carlo_risk(const uncertainty::Boundary& b, const ErrorModel& em,
                                    const grid::PriceSchedule& prices, std::int64_t samples,
                                    std::uint64_t seed, int workers) {
  check_dims(b, em, prices);
  if (samples < 1) throw Error(ErrorCode::kSchemaViolation, "mc.samples must be >= 1");
  workers = std::max(1, workers);
  const int M = em.farms();
  const int T = em.horizon();

  struct Partial {
    std::vector<double> qp, qn;  // [m*T+t]
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::vector<Partial> parts(workers);
  auto work = [&](int w) {
    Partial& part = parts[w];
    part.qp.assign(M * T, 0.0);
    part.qn.assign(M * T, 0.0);
    const std::int64_t begin = samples * w / workers;
    const std::int64_t end = samples * (w + 1) / workers;
    std::seed_seq seq{seed, static_cast<std::uint64_t>(w)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::int64_t i = begin; i < end; ++i) {
      double cost = 0.0;
      for (int m = 0; m < M; ++m) {
        for (int t = 0; t < T; ++t) {
          const double s = em.sd(m, t);
          if (s <= 0.0) continue;
          double d;
          do {
            d = s * normal(rng);
          } while (d < em.support_lo(m, t) || d > em.support_hi(m, t));
          const double fc = em.forecast(m, t);
          const double up = prices.reg_up[t] * std::max(0.0, d - (b.upper[m][t] - fc));
          const double dn = prices.reg_dn[t] * std::max(0.0, (b.lower[m][t] - fc) - d);
          part.qp[m * T + t] += up;
          part.qn[m * T + t] += dn;
          cost += up + dn;
        }
      }
      part.sum += cost;
      part.sum_sq += cost * cost;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  MonteCarloEstimate est;
  est.value = zero_value(M, T);
  double sum = 0.0, sum_sq = 0.0;
  for (const Partial& part : parts) {
    for (int m = 0; m < M; ++m) {
      for (int t = 0; t < T; ++t) {
        est.value.q_p[m][t] += part.qp[m * T + t];
        est.value.q_n[m][t] += part.qn[m * T + t];
      }
    }
    sum += part.sum;
    sum_sq += part.sum_sq;
  }
  const double n = static_cast<double>(samples);
  for (int m = 0; m < M; ++m) {
    for (int t = 0; t < T; ++t) {
      est.value.q_p[m][t] /= n;
      est.value.q_n[m][t] /= n;
    }
  }
  const double mean = sum / n;
  est.value.total = mean;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    est.stderr_total = std::sqrt(var / n);
  }
  return est;
}

}  // namespace windadm::risk
