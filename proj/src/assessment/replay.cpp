#include "windadm/assessment/replay.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "windadm/common/error.hpp"
#include "windadm/grid/recourse.hpp"

namespace windadm::assessment {
namespace {

// Dispatch cost of every sample, computed over contiguous blocks.
std::vector<double> costs_of(std::int64_t n, int workers,
                             const std::function<double(std::int64_t)>& cost) {
  std::vector<double> out(n, 0.0);
  workers = static_cast<int>(std::clamp<std::int64_t>(workers, 1, std::max<std::int64_t>(n, 1)));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::int64_t lo = n * w / workers;
      const std::int64_t hi = n * (w + 1) / workers;
      try {
        for (std::int64_t i = lo; i < hi; ++i) out[i] = cost(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t family, std::int64_t i) {
  std::seed_seq seq{seed, family, static_cast<std::uint64_t>(i)};
  return std::mt19937_64(seq);
}

}  // namespace

ReplayReport replay_scenarios(const grid::Network& net, const grid::UcSchedule& uc,
                              const grid::PriceSchedule& prices, const risk::ErrorModel& em,
                              const uncertainty::Boundary& b,
                              const uncertainty::Budgets& budgets, const ReplayConfig& cfg) {
  b.validate(net);
  budgets.validate(net.num_farms(), net.horizon);
  if (cfg.samples < 0 || cfg.workers < 1) {
    throw Error(ErrorCode::kSchemaViolation, "replay needs samples >= 0 and workers >= 1");
  }
  const int M = net.num_farms();
  const int T = net.horizon;
  auto dispatch_cost = [&](const grid::WindSeries& w) {
    return grid::evaluate_scenario(net, uc, prices, w).objective;
  };

  ReplayReport rep;
  const auto vertices = uncertainty::all_vertices(M, T, budgets, cfg.vertex_cap);
  std::vector<grid::WindSeries> corner;
  corner.reserve(vertices.size());
  for (const auto& v : vertices) corner.push_back(uncertainty::realize_wind(v, b, net));
  const auto vc = costs_of(static_cast<std::int64_t>(corner.size()), cfg.workers,
                           [&](std::int64_t i) { return dispatch_cost(corner[i]); });
  rep.vertices = static_cast<std::int64_t>(vc.size());
  for (double c : vc) {
    rep.worst_vertex_cost = std::max(rep.worst_vertex_cost, c);
    if (c > cfg.tolerance) ++rep.vertex_failures;
  }

  const auto hc = costs_of(cfg.samples, cfg.workers, [&](std::int64_t i) {
    auto rng = stream(cfg.seed, 1, i);
    std::uniform_int_distribution<std::size_t> pick(0, corner.size() - 1);
    std::exponential_distribution<double> weight(1.0);
    std::size_t idx[3];
    double lam[3];
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      idx[k] = pick(rng);
      lam[k] = weight(rng);
      sum += lam[k];
    }
    grid::WindSeries w(M, std::vector<double>(T, 0.0));
    for (int m = 0; m < M; ++m) {
      for (int t = 0; t < T; ++t) {
        for (int k = 0; k < 3; ++k) w[m][t] += lam[k] / sum * corner[idx[k]][m][t];
        w[m][t] = std::clamp(w[m][t], b.lower[m][t], b.upper[m][t]);
      }
    }
    return dispatch_cost(w);
  });
  rep.hull_samples = cfg.samples;
  for (double c : hc) {
    rep.worst_hull_cost = std::max(rep.worst_hull_cost, c);
    if (c > cfg.tolerance) ++rep.hull_failures;
  }

  const auto tc = costs_of(cfg.samples, cfg.workers, [&](std::int64_t i) {
    auto rng = stream(cfg.seed, 2, i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    grid::WindSeries w(M, std::vector<double>(T));
    for (int m = 0; m < M; ++m) {
      for (int t = 0; t < T; ++t) {
        const double fc = em.forecast(m, t);
        const double u = unit(rng);
        if (em.sd(m, t) <= 0.0) {
          w[m][t] = fc;
          continue;
        }
        const double lo = em.cdf(m, t, b.lower[m][t] - fc);
        const double hi = em.cdf(m, t, b.upper[m][t] - fc);
        const double d = em.inverse_cdf(m, t, lo + u * (hi - lo));
        w[m][t] = std::clamp(fc + d, b.lower[m][t], b.upper[m][t]);
      }
    }
    return dispatch_cost(w);
  });
  rep.trajectories = cfg.samples;
  double total = 0.0;
  for (double c : tc) {
    total += c;
    rep.worst_trajectory_cost = std::max(rep.worst_trajectory_cost, c);
    if (c <= cfg.tolerance) ++rep.trajectory_zero;
  }
  rep.mean_trajectory_cost = cfg.samples > 0 ? total / static_cast<double>(cfg.samples) : 0.0;
  return rep;
}

}  // namespace windadm::assessment
