#pragma once

#include <cstdint>

#include "windadm/grid/network.hpp"
#include "windadm/risk/error_model.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::assessment {

struct ReplayConfig {
  std::int64_t samples = 10'000;  // per sampled family
  std::uint64_t seed = 1;
  int workers = 4;
  double tolerance = 1e-5;  // $; dispatch cost counted as zero below this
  std::uint64_t vertex_cap = uncertainty::kDefaultVertexCap;
};

struct ReplayReport {
  // Every vertex of the budgeted region.
  std::int64_t vertices = 0;
  std::int64_t vertex_failures = 0;
  double worst_vertex_cost = 0.0;
  // Random convex combinations of three vertices.
  std::int64_t hull_samples = 0;
  std::int64_t hull_failures = 0;
  double worst_hull_cost = 0.0;
  // Forecast-error trajectories truncated to the box [w^l, w^u]; these may
  // deviate in more periods than the budget allows.
  std::int64_t trajectories = 0;
  std::int64_t trajectory_zero = 0;
  double mean_trajectory_cost = 0.0;
  double worst_trajectory_cost = 0.0;
};

// Replays wind inside a boundary through the dispatch LP. Sample i of each
// family draws from mt19937_64 seeded with seed_seq{seed, family, i}, so the
// report does not depend on the worker count.
ReplayReport replay_scenarios(const grid::Network& net, const grid::UcSchedule& uc,
                              const grid::PriceSchedule& prices, const risk::ErrorModel& em,
                              const uncertainty::Boundary& b,
                              const uncertainty::Budgets& budgets,
                              const ReplayConfig& cfg = {});

}  // namespace windadm::assessment
