#include "windadm/risk/pla.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::risk {
namespace {

// int_lo^hi (d - x)(c d + k) dd in closed form.
double moment(double c, double k, double lo, double hi, double x) {
  auto prim = [&](double u) { return c * u * u * u / 3.0 + (k - c * x) * u * u / 2.0 - k * x * u; };
  return prim(hi) - prim(lo);
}

// Piecewise-linear density through (q[i], y[i]); q is monotone, either
// direction, and the density is zero outside [min q, max q].
struct LinearPdf {
  std::vector<double> q, y;

  // Expected excess above x: int_{d > x} (d - x) pdf(d) dd.
  double excess_above(double x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
      double lo = std::min(q[i], q[i + 1]), hi = std::max(q[i], q[i + 1]);
      if (hi - lo <= 0.0) continue;
      const double c = (y[i + 1] - y[i]) / (q[i + 1] - q[i]);
      const double k = y[i] - c * q[i];
      lo = std::max(lo, x);
      if (lo < hi) sum += moment(c, k, lo, hi, x);
    }
    return sum;
  }
  // Expected shortfall below x: int_{d < x} (x - d) pdf(d) dd.
  double shortfall_below(double x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
      double lo = std::min(q[i], q[i + 1]), hi = std::max(q[i], q[i + 1]);
      if (hi - lo <= 0.0) continue;
      const double c = (y[i + 1] - y[i]) / (q[i + 1] - q[i]);
      const double k = y[i] - c * q[i];
      hi = std::min(hi, x);
      if (lo < hi) sum -= moment(c, k, lo, hi, x);
    }
    return sum;
  }
};

// Chord breakpoints: each ladder interval split into z equal parts, ending
// at zero error.
std::vector<double> chord_points(const std::vector<double>& q, int z) {
  std::vector<double> f;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    for (int j = 0; j < z; ++j) f.push_back(q[k] + j * (q[k + 1] - q[k]) / z);
  }
  f.push_back(q.back());
  return f;
}

// Chords through (forecast + f_i, g e_i). A zero-length chord copies the
// nearest usable neighbour, later ones first.
std::vector<Cut> chords(const std::vector<double>& f, const std::vector<double>& e, double g,
                        double forecast) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<Cut> cuts(n);
  std::vector<bool> ok(n, false);
  for (int i = 0; i < n; ++i) {
    const double df = f[i + 1] - f[i];
    if (std::abs(df) <= 1e-12 * std::max(1.0, std::abs(f[i]))) continue;
    cuts[i].a = g * (e[i + 1] - e[i]) / df;
    cuts[i].b = g * e[i] - cuts[i].a * (forecast + f[i]);
    ok[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (ok[i]) continue;
    for (int d = 1; d < n; ++d) {
      if (i + d < n && ok[i + d]) {
        cuts[i] = cuts[i + d];
        break;
      }
      if (i - d >= 0 && ok[i - d]) {
        cuts[i] = cuts[i - d];
        break;
      }
    }
  }
  return cuts;
}

void check_ladder(const PlaConfig& cfg) {
  if (cfg.z < 1) throw Error(ErrorCode::kSchemaViolation, "pla.z must be >= 1");
  if (cfg.alphas.empty()) {
    throw Error(ErrorCode::kNonMonotoneLadder, "pla.alphas must not be empty");
  }
  double prev = cfg.alpha0;
  if (!(prev >= 0.0)) throw Error(ErrorCode::kNonMonotoneLadder, "pla.alpha0 must be >= 0");
  for (double a : cfg.alphas) {
    if (!(a > prev) || !(a < 0.5)) {
      throw Error(ErrorCode::kNonMonotoneLadder,
                  fmt::format("confidence levels must increase strictly from {} and stay "
                              "below 0.5; got {} after {}",
                              cfg.alpha0, a, prev));
    }
    prev = a;
  }
}

}  // namespace

PlaCoefficients build_pla(const ErrorModel& em, const PlaConfig& cfg,
                          const grid::PriceSchedule& prices) {
  check_ladder(cfg);
  const int M = em.farms();
  const int T = em.horizon();
  if (static_cast<int>(prices.reg_up.size()) != T || static_cast<int>(prices.reg_dn.size()) != T) {
    throw Error(ErrorCode::kDimensionMismatch, "regulation prices do not span the horizon");
  }
  PlaCoefficients pc;
  pc.farms = M;
  pc.horizon = T;
  pc.pieces = cfg.pieces();
  pc.z = cfg.z;
  const int n_cuts = pc.cuts_per_side();
  auto grid3 = [&](auto value) {
    return std::vector(M, std::vector(T, std::vector<decltype(value)>()));
  };
  pc.upper = grid3(Cut{});
  pc.lower = grid3(Cut{});
  pc.f_upper = grid3(0.0);
  pc.e_upper = grid3(0.0);
  pc.f_lower = grid3(0.0);
  pc.e_lower = grid3(0.0);

  std::vector<double> levels{cfg.alpha0};
  levels.insert(levels.end(), cfg.alphas.begin(), cfg.alphas.end());

  for (int m = 0; m < M; ++m) {
    for (int t = 0; t < T; ++t) {
      const double fc = em.forecast(m, t);
      if (em.sd(m, t) <= 0.0) {
        pc.upper[m][t].assign(n_cuts, Cut{});
        pc.lower[m][t].assign(n_cuts, Cut{});
        pc.f_upper[m][t].assign(n_cuts + 1, 0.0);
        pc.e_upper[m][t].assign(n_cuts + 1, 0.0);
        pc.f_lower[m][t].assign(n_cuts + 1, 0.0);
        pc.e_lower[m][t].assign(n_cuts + 1, 0.0);
        continue;
      }
      LinearPdf lo_pdf, up_pdf;
      for (double a : levels) {
        lo_pdf.q.push_back(em.inverse_cdf(m, t, a));
        up_pdf.q.push_back(em.inverse_cdf(m, t, 1.0 - a));
      }
      if (!(lo_pdf.q.back() < 0.0) || !(up_pdf.q.back() > 0.0)) {
        throw Error(ErrorCode::kNonMonotoneLadder,
                    fmt::format("innermost level {} does not bracket zero error for farm {} "
                                "period {} (CDF at zero is {})",
                                levels.back(), m + 1, t + 1, em.cdf(m, t, 0.0)));
      }
      lo_pdf.q.push_back(0.0);
      up_pdf.q.push_back(0.0);
      for (double q : lo_pdf.q) lo_pdf.y.push_back(em.pdf(m, t, q));
      for (double q : up_pdf.q) up_pdf.y.push_back(em.pdf(m, t, q));

      auto& fu = pc.f_upper[m][t];
      auto& eu = pc.e_upper[m][t];
      fu = chord_points(up_pdf.q, cfg.z);
      for (double f : fu) eu.push_back(up_pdf.excess_above(f));
      pc.upper[m][t] = chords(fu, eu, prices.reg_up[t], fc);

      auto& fl = pc.f_lower[m][t];
      auto& el = pc.e_lower[m][t];
      fl = chord_points(lo_pdf.q, cfg.z);
      for (double f : fl) el.push_back(lo_pdf.shortfall_below(f));
      pc.lower[m][t] = chords(fl, el, prices.reg_dn[t], fc);
    }
  }
  return pc;
}

RiskValue risk_pla(const uncertainty::Boundary& b, const PlaCoefficients& pc) {
  bool ok = static_cast<int>(b.upper.size()) == pc.farms &&
            static_cast<int>(b.lower.size()) == pc.farms;
  for (int m = 0; ok && m < pc.farms; ++m) {
    ok = static_cast<int>(b.upper[m].size()) == pc.horizon &&
         static_cast<int>(b.lower[m].size()) == pc.horizon;
  }
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, "boundary does not match the PLA cuts");
  RiskValue out;
  out.q_p.assign(pc.farms, std::vector<double>(pc.horizon, 0.0));
  out.q_n.assign(pc.farms, std::vector<double>(pc.horizon, 0.0));
  for (int m = 0; m < pc.farms; ++m) {
    for (int t = 0; t < pc.horizon; ++t) {
      double qp = 0.0, qn = 0.0;
      for (const Cut& c : pc.upper[m][t]) qp = std::max(qp, c.a * b.upper[m][t] + c.b);
      for (const Cut& c : pc.lower[m][t]) qn = std::max(qn, c.a * b.lower[m][t] + c.b);
      out.q_p[m][t] = qp;
      out.q_n[m][t] = qn;
      out.total += qp + qn;
    }
  }
  return out;
}

void write_pla_csv(std::ostream& out, const PlaCoefficients& pc) {
  out << "farm,period,s,z,a_p,b_p,a_n,b_n\n";
  for (int m = 0; m < pc.farms; ++m) {
    for (int t = 0; t < pc.horizon; ++t) {
      for (int s = 0; s < pc.pieces; ++s) {
        for (int z = 0; z < pc.z; ++z) {
          const Cut& up = pc.upper[m][t][s * pc.z + z];
          const Cut& lo = pc.lower[m][t][s * pc.z + z];
          out << fmt::format("{},{},{},{},{},{},{},{}\n", m + 1, t + 1, s, z, up.a, up.b, lo.a,
                             lo.b);
        }
      }
    }
  }
}

}  // namespace windadm::risk
