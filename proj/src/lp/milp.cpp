#include "windadm/lp/milp.hpp"

#include <cmath>
#include <queue>
#include <utility>

namespace windadm::lp {

std::string_view to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kUnbounded: return "unbounded";
    case MilpStatus::kNodeLimit: return "node-limit-exceeded";
  }
  return "unknown";
}

namespace {

struct Node {
  double bound = 0.0;  // parent relaxation value, minimization sense
  std::int64_t id = 0;
  std::vector<double> lower;  // per integer variable
  std::vector<double> upper;
  Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MilpResult solve_milp(const MilpProblem& milp, const Tolerances& tol,
                      std::int64_t node_limit) {
  milp.validate();
  MilpResult result;
  LinearProgram work = milp.lp();
  const int n = work.num_variables();
  const double sign = work.sense() == Sense::kMaximize ? -1.0 : 1.0;

  std::vector<int> ints;
  for (int j = 0; j < n; ++j) {
    if (milp.is_integer(j)) ints.push_back(j);
  }
  const int k = static_cast<int>(ints.size());

  Node root;
  root.bound = -kInf;
  root.lower.resize(k);
  root.upper.resize(k);
  for (int i = 0; i < k; ++i) {
    const auto& v = work.variable(ints[i]);
    root.lower[i] = std::ceil(v.lower - tol.int_tol);
    root.upper[i] = std::floor(v.upper + tol.int_tol);
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(std::move(root));
  std::int64_t next_id = 1;
  double incumbent = kInf;  // minimization sense
  std::vector<double> best_x;

  while (!open.empty()) {
    if (open.top().bound >= incumbent - tol.opt_gap) {
      // Best-bound order: nothing left can improve.
      while (!open.empty()) open.pop();
      break;
    }
    if (result.nodes >= node_limit) break;
    Node node = open.top();
    open.pop();

    bool empty_box = false;
    for (int i = 0; i < k; ++i) {
      if (node.lower[i] > node.upper[i]) empty_box = true;
      work.set_bounds(ints[i], node.lower[i], node.upper[i]);
    }
    if (empty_box) continue;

    LpSolution rel = node.basis.empty() ? solve_lp(work, tol)
                                        : solve_lp_from(work, node.basis, tol);
    ++result.nodes;
    result.lp_iterations += rel.iterations;

    if (rel.status == LpStatus::kUnbounded) {
      result.status = MilpStatus::kUnbounded;
      return result;
    }
    if (rel.status == LpStatus::kInfeasible) continue;
    const double value = sign * rel.objective;
    if (value >= incumbent - tol.opt_gap) continue;

    int branch = -1;
    double best_score = tol.int_tol;
    for (int i = 0; i < k; ++i) {
      const double xv = rel.x[ints[i]];
      const double frac = xv - std::floor(xv);
      const double score = std::min(frac, 1.0 - frac);
      if (score > best_score) {
        best_score = score;
        branch = i;
      }
    }

    if (branch < 0) {
      incumbent = value;
      best_x = std::move(rel.x);
      result.has_incumbent = true;
      continue;
    }

    const double xv = rel.x[ints[branch]];
    Node down;
    down.bound = value;
    down.id = next_id++;
    down.lower = node.lower;
    down.upper = node.upper;
    down.upper[branch] = std::floor(xv);
    down.basis = rel.basis;
    Node up;
    up.bound = value;
    up.id = next_id++;
    up.lower = std::move(node.lower);
    up.upper = std::move(node.upper);
    up.lower[branch] = std::ceil(xv);
    up.basis = std::move(rel.basis);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  const bool exhausted = open.empty();
  if (!result.has_incumbent) {
    result.status = exhausted ? MilpStatus::kInfeasible : MilpStatus::kNodeLimit;
    result.bound = exhausted ? 0.0 : sign * open.top().bound;
    return result;
  }

  // Polish: fix integers at their rounded values and re-solve the rest.
  for (int i = 0; i < k; ++i) {
    const double r = std::round(best_x[ints[i]]);
    work.set_bounds(ints[i], r, r);
  }
  LpSolution polished = solve_lp(work, tol);
  result.lp_iterations += polished.iterations;
  if (polished.status == LpStatus::kOptimal) {
    best_x = std::move(polished.x);
  } else {
    for (int i = 0; i < k; ++i) best_x[ints[i]] = std::round(best_x[ints[i]]);
  }
  result.x = std::move(best_x);
  result.objective = milp.lp().evaluate_objective(result.x);
  if (exhausted) {
    result.status = MilpStatus::kOptimal;
    result.bound = result.objective;
    result.gap = 0.0;
  } else {
    result.status = MilpStatus::kNodeLimit;
    const double b = std::min(sign * open.top().bound, sign * result.objective);
    result.bound = sign * b;
    result.gap = std::abs(result.objective - result.bound);
  }
  return result;
}

}  // namespace windadm::lp
