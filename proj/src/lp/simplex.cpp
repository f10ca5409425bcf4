#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "windadm/common/error.hpp"
#include "windadm/lp/solver.hpp"

namespace windadm::lp {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// LU of the basis matrix plus a product-form eta file:
//   B_k = B_0 E_1 ... E_k.
class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m) {}

  bool refactor(const std::vector<Eigen::Triplet<double>>& triplets) {
    etas_.clear();
    if (m_ == 0) return true;
    Eigen::SparseMatrix<double> b(m_, m_);
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    return lu_.info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double pivot_value = v[e.row] / e.pivot;
      v[e.row] = pivot_value;
      if (pivot_value == 0.0) continue;
      for (std::size_t k = 0; k < e.index.size(); ++k) {
        v[e.index[k]] -= e.value[k] * pivot_value;
      }
    }
  }

  void btran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->row];
      for (std::size_t k = 0; k < it->index.size(); ++k) {
        acc -= it->value[k] * v[it->index[k]];
      }
      v[it->row] = acc / it->pivot;
    }
    v = lu_.transpose().solve(v);
  }

  // Records the column replacement at basis position `row` with the FTRAN'd
  // entering column `alpha`.
  void update(int row, const Eigen::VectorXd& alpha) {
    Eta e;
    e.row = row;
    e.pivot = alpha[row];
    for (int i = 0; i < m_; ++i) {
      if (i != row && alpha[i] != 0.0) {
        e.index.push_back(i);
        e.value.push_back(alpha[i]);
      }
    }
    etas_.push_back(std::move(e));
  }

  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  int m_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

// Internal computational form: structural columns 0..n-1 followed by one
// logical column +e_i per row, so that A x + s = 0 with the row relation
// carried by the bounds of s. The objective is always minimized.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Tolerances& tol)
      : lp_(lp), tol_(tol), n_(lp.num_variables()), m_(lp.num_constraints()),
        factor_(m_) {
    build_columns();
    build_bounds_and_costs();
  }

  LpSolution run(const Basis* start) {
    bool warm = false;
    if (start != nullptr && load_basis(*start)) warm = refactor();
    if (!warm) {
      logical_basis();
      if (!refactor()) {
        throw Error(ErrorCode::kNumericBreakdown,
                    "logical basis failed to factorize");
      }
    }
    compute_basic_values();

    LpStatus status = iterate();
    if (status == LpStatus::kOptimal) {
      // One clean refactorization before reporting; drift may reopen the
      // iteration.
      for (int attempt = 0; attempt < 3; ++attempt) {
        if (!refactor()) restart_from_logical();
        compute_basic_values();
        if (max_basic_infeasibility() <= tol_.feas_tol && !has_candidate()) break;
        status = iterate();
        if (status != LpStatus::kOptimal) break;
      }
    }
    return extract(status);
  }

 private:
  // ---- setup -------------------------------------------------------------

  void build_columns() {
    std::vector<std::vector<std::pair<int, double>>> cols(n_);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : lp_.constraint(i).terms) {
        if (t.coef != 0.0) cols[t.var].push_back({i, t.coef});
      }
    }
    col_start_.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) {
      auto& c = cols[j];
      std::sort(c.begin(), c.end());
      // Merge duplicate row entries.
      std::vector<std::pair<int, double>> merged;
      for (const auto& [row, v] : c) {
        if (!merged.empty() && merged.back().first == row) {
          merged.back().second += v;
        } else {
          merged.push_back({row, v});
        }
      }
      for (const auto& [row, v] : merged) {
        if (v == 0.0) continue;
        row_index_.push_back(row);
        value_.push_back(v);
      }
      col_start_[j + 1] = static_cast<int>(row_index_.size());
    }
  }

  void build_bounds_and_costs() {
    const int total = n_ + m_;
    lower_.assign(total, 0.0);
    upper_.assign(total, 0.0);
    cost_.assign(total, 0.0);
    const double sign = lp_.sense() == Sense::kMaximize ? -1.0 : 1.0;
    double cmax = 1.0;
    for (int j = 0; j < n_; ++j) {
      const auto& v = lp_.variable(j);
      lower_[j] = v.lower;
      upper_[j] = v.upper;
      cost_[j] = sign * v.objective;
      cmax = std::max(cmax, std::abs(v.objective));
    }
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp_.constraint(i);
      const int k = n_ + i;
      switch (row.relation) {
        case Relation::kLessEqual:
          lower_[k] = -row.rhs;
          upper_[k] = kInf;
          break;
        case Relation::kGreaterEqual:
          lower_[k] = -kInf;
          upper_[k] = -row.rhs;
          break;
        case Relation::kEqual:
          lower_[k] = upper_[k] = -row.rhs;
          break;
      }
    }
    dual_tol_ = tol_.opt_tol * cmax;
  }

  void set_nonbasic_default(int j) {
    if (std::isfinite(lower_[j])) {
      status_[j] = BasisStatus::kAtLower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      status_[j] = BasisStatus::kAtUpper;
      x_[j] = upper_[j];
    } else {
      status_[j] = BasisStatus::kFree;
      x_[j] = 0.0;
    }
  }

  void logical_basis() {
    const int total = n_ + m_;
    status_.assign(total, BasisStatus::kAtLower);
    x_.assign(total, 0.0);
    pos_.assign(total, -1);
    head_.assign(m_, 0);
    for (int j = 0; j < n_; ++j) set_nonbasic_default(j);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
      status_[n_ + i] = BasisStatus::kBasic;
    }
  }

  bool load_basis(const Basis& b) {
    if (static_cast<int>(b.structural.size()) != n_ ||
        static_cast<int>(b.logical.size()) != m_) {
      return false;
    }
    const int total = n_ + m_;
    status_.assign(total, BasisStatus::kAtLower);
    x_.assign(total, 0.0);
    pos_.assign(total, -1);
    head_.clear();
    for (int j = 0; j < total; ++j) {
      const BasisStatus s = j < n_ ? b.structural[j] : b.logical[j - n_];
      if (s == BasisStatus::kBasic) {
        pos_[j] = static_cast<int>(head_.size());
        head_.push_back(j);
        status_[j] = s;
        continue;
      }
      if (s == BasisStatus::kAtLower && std::isfinite(lower_[j])) {
        status_[j] = s;
        x_[j] = lower_[j];
      } else if (s == BasisStatus::kAtUpper && std::isfinite(upper_[j])) {
        status_[j] = s;
        x_[j] = upper_[j];
      } else {
        set_nonbasic_default(j);
      }
    }
    return static_cast<int>(head_.size()) == m_;
  }

  void restart_from_logical() {
    logical_basis();
    if (!refactor()) {
      throw Error(ErrorCode::kNumericBreakdown,
                  "logical basis failed to factorize");
    }
    bland_ = true;
  }

  // ---- linear algebra ----------------------------------------------------

  bool refactor() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m_) * 2);
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (j >= n_) {
        trip.emplace_back(j - n_, p, 1.0);
      } else {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          trip.emplace_back(row_index_[k], p, value_[k]);
        }
      }
    }
    return factor_.refactor(trip);
  }

  void load_column(int j, Eigen::VectorXd& v) const {
    v.setZero(m_);
    if (j >= n_) {
      v[j - n_] = 1.0;
      return;
    }
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      v[row_index_[k]] = value_[k];
    }
  }

  // x_B = B^{-1} (-N x_N)
  void compute_basic_values() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::kBasic || x_[j] == 0.0) continue;
      if (j >= n_) {
        rhs[j - n_] -= x_[j];
      } else {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          rhs[row_index_[k]] -= value_[k] * x_[j];
        }
      }
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  double infeasibility(int j) const {
    if (x_[j] < lower_[j] - tol_.feas_tol) return lower_[j] - x_[j];
    if (x_[j] > upper_[j] + tol_.feas_tol) return x_[j] - upper_[j];
    return 0.0;
  }

  double max_basic_infeasibility() const {
    double worst = 0.0;
    for (int p = 0; p < m_; ++p) worst = std::max(worst, infeasibility(head_[p]));
    return worst;
  }

  double reduced_cost(int j, const Eigen::VectorXd& y,
                      const std::vector<double>& cost) const {
    if (j >= n_) return cost[j] - y[j - n_];
    double d = cost[j];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      d -= y[row_index_[k]] * value_[k];
    }
    return d;
  }

  // Fills y = c_B' B^{-1} for the active cost vector. Returns true in phase 1.
  bool compute_duals(Eigen::VectorXd& y) {
    bool phase1 = false;
    y.setZero(m_);
    phase_cost_.assign(n_ + m_, 0.0);
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (x_[j] < lower_[j] - tol_.feas_tol) {
        phase_cost_[j] = -1.0;
        phase1 = true;
      } else if (x_[j] > upper_[j] + tol_.feas_tol) {
        phase_cost_[j] = 1.0;
        phase1 = true;
      }
    }
    const std::vector<double>& c = phase1 ? phase_cost_ : cost_;
    for (int p = 0; p < m_; ++p) y[p] = c[head_[p]];
    factor_.btran(y);
    phase1_ = phase1;
    return phase1;
  }

  struct Candidate {
    int var = -1;
    int dir = 0;
  };

  Candidate price(const Eigen::VectorXd& y) const {
    const std::vector<double>& c = phase1_ ? phase_cost_ : cost_;
    Candidate best;
    double best_score = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lower_[j] == upper_[j]) continue;
      const double d = reduced_cost(j, y, c);
      int dir = 0;
      if (s == BasisStatus::kAtLower && d < -dual_tol_) {
        dir = 1;
      } else if (s == BasisStatus::kAtUpper && d > dual_tol_) {
        dir = -1;
      } else if (s == BasisStatus::kFree && std::abs(d) > dual_tol_) {
        dir = d < 0 ? 1 : -1;
      }
      if (dir == 0) continue;
      if (bland_) return Candidate{j, dir};
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = Candidate{j, dir};
      }
    }
    return best;
  }

  bool has_candidate() {
    Eigen::VectorXd y;
    compute_duals(y);
    if (phase1_) return true;
    return price(y).var >= 0;
  }

  // ---- main loop ---------------------------------------------------------

  LpStatus iterate() {
    Eigen::VectorXd y;
    Eigen::VectorXd alpha;
    int stall = 0;
    while (true) {
      if (++iterations_ > tol_.max_iterations) {
        throw Error(ErrorCode::kNumericBreakdown,
                    fmt::format("simplex iteration limit {} reached",
                                tol_.max_iterations));
      }
      const bool phase1 = compute_duals(y);
      const Candidate cand = price(y);
      if (cand.var < 0) {
        if (phase1) return LpStatus::kInfeasible;
        return LpStatus::kOptimal;
      }
      const int q = cand.var;
      load_column(q, alpha);
      factor_.ftran(alpha);

      const auto step = ratio_test(q, cand.dir, alpha, phase1);
      if (!step.bounded) {
        if (phase1) {
          // Tolerance noise produced a useless direction; take Bland's rule
          // to break out.
          bland_ = true;
          if (++stall > tol_.stall_threshold * 4) {
            throw Error(ErrorCode::kNumericBreakdown,
                        "phase 1 found no improving bounded direction");
          }
          continue;
        }
        return LpStatus::kUnbounded;
      }

      const double theta = step.theta;
      if (theta <= 1e-12) {
        if (++stall >= tol_.stall_threshold) bland_ = true;
      } else {
        stall = 0;
        bland_ = false;
      }

      // Move.
      x_[q] += cand.dir * theta;
      if (theta != 0.0) {
        for (int p = 0; p < m_; ++p) {
          if (alpha[p] != 0.0) x_[head_[p]] -= cand.dir * theta * alpha[p];
        }
      }

      if (step.leave_pos < 0) {
        // Bound flip of the entering variable.
        if (cand.dir > 0) {
          status_[q] = BasisStatus::kAtUpper;
          x_[q] = upper_[q];
        } else {
          status_[q] = BasisStatus::kAtLower;
          x_[q] = lower_[q];
        }
        continue;
      }

      const int r = step.leave_pos;
      const int leaving = head_[r];
      status_[leaving] = step.leave_to_upper ? BasisStatus::kAtUpper
                                             : BasisStatus::kAtLower;
      x_[leaving] = step.leave_to_upper ? upper_[leaving] : lower_[leaving];
      pos_[leaving] = -1;
      head_[r] = q;
      pos_[q] = r;
      status_[q] = BasisStatus::kBasic;

      factor_.update(r, alpha);
      if (factor_.eta_count() >= tol_.refactor_interval) {
        if (!refactor()) {
          restart_from_logical();
        }
        compute_basic_values();
      }
    }
  }

  struct Step {
    bool bounded = false;
    double theta = 0.0;
    int leave_pos = -1;  // -1: bound flip
    bool leave_to_upper = false;
  };

  // Harris two-pass ratio test. In phase 1 an infeasible basic variable moving
  // toward its violated bound is blocked when it reaches that bound.
  Step ratio_test(int q, int dir, const Eigen::VectorXd& alpha,
                  bool phase1) const {
    Step step;
    const double ftol = tol_.feas_tol;
    double theta_max = kInf;
    const double range = upper_[q] - lower_[q];
    if (std::isfinite(range)) theta_max = range;

    auto limit = [&](int p, bool relaxed, bool& to_upper) -> double {
      const double a = alpha[p];
      if (std::abs(a) <= tol_.pivot_tol) return kInf;
      const int j = head_[p];
      const double rate = -dir * a;  // d x_j / d theta
      const double xj = x_[j];
      const double slack = relaxed ? ftol : 0.0;
      if (phase1 && xj < lower_[j] - ftol) {
        if (rate > 0) {
          to_upper = false;
          return (lower_[j] - xj) / rate;
        }
        return kInf;
      }
      if (phase1 && xj > upper_[j] + ftol) {
        if (rate < 0) {
          to_upper = true;
          return (xj - upper_[j]) / -rate;
        }
        return kInf;
      }
      if (rate < 0 && std::isfinite(lower_[j])) {
        to_upper = false;
        return std::max(0.0, (xj - lower_[j] + slack) / -rate);
      }
      if (rate > 0 && std::isfinite(upper_[j])) {
        to_upper = true;
        return std::max(0.0, (upper_[j] + slack - xj) / rate);
      }
      return kInf;
    };

    if (bland_) {
      // Textbook min-ratio; ties go to the smallest variable index.
      double best = theta_max;
      int best_pos = -1;
      bool best_upper = false;
      for (int p = 0; p < m_; ++p) {
        bool to_upper = false;
        const double t = limit(p, false, to_upper);
        if (t == kInf) continue;
        if (t < best - 1e-12 ||
            (best_pos >= 0 && t <= best + 1e-12 && head_[p] < head_[best_pos])) {
          best = std::min(best, t);
          best_pos = p;
          best_upper = to_upper;
        }
      }
      if (best_pos < 0 && !std::isfinite(theta_max)) return step;
      step.bounded = true;
      if (best_pos < 0) {
        step.theta = theta_max;
        return step;
      }
      step.theta = best;
      step.leave_pos = best_pos;
      step.leave_to_upper = best_upper;
      return step;
    }

    // Pass 1: relaxed bounds.
    double relaxed_max = theta_max;
    for (int p = 0; p < m_; ++p) {
      bool to_upper = false;
      relaxed_max = std::min(relaxed_max, limit(p, true, to_upper));
    }
    if (!std::isfinite(relaxed_max)) return step;
    step.bounded = true;

    // Pass 2: among exact ratios within the relaxed step, take the largest
    // pivot magnitude.
    int best_pos = -1;
    double best_alpha = 0.0;
    double best_theta = 0.0;
    bool best_upper = false;
    for (int p = 0; p < m_; ++p) {
      bool to_upper = false;
      const double t = limit(p, false, to_upper);
      if (t == kInf || t > relaxed_max) continue;
      const double mag = std::abs(alpha[p]);
      if (mag > best_alpha) {
        best_alpha = mag;
        best_pos = p;
        best_theta = t;
        best_upper = to_upper;
      }
    }
    if (best_pos < 0 || (std::isfinite(range) && range <= relaxed_max &&
                         range <= best_theta)) {
      // Entering variable reaches its opposite bound first.
      if (std::isfinite(range) && range <= relaxed_max) {
        step.theta = range;
        step.leave_pos = -1;
        return step;
      }
      if (best_pos < 0) {
        step.bounded = false;
        return step;
      }
    }
    step.theta = best_theta;
    step.leave_pos = best_pos;
    step.leave_to_upper = best_upper;
    return step;
  }

  // ---- output ------------------------------------------------------------

  LpSolution extract(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.x.assign(x_.begin(), x_.begin() + n_);
    sol.basis.structural.assign(status_.begin(), status_.begin() + n_);
    sol.basis.logical.assign(status_.begin() + n_, status_.end());
    if (status != LpStatus::kOptimal) {
      sol.duals.assign(m_, 0.0);
      sol.reduced_costs.assign(n_, 0.0);
      return sol;
    }
    // Snap nonbasic values exactly onto their bounds.
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == BasisStatus::kBasic) continue;
      sol.x[j] = x_[j];
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
    factor_.btran(y);
    const double sign = lp_.sense() == Sense::kMaximize ? -1.0 : 1.0;
    sol.duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.duals[i] = sign * y[i];
    sol.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] =
          status_[j] == BasisStatus::kBasic ? 0.0 : sign * reduced_cost(j, y, cost_);
    }
    sol.objective = lp_.evaluate_objective(sol.x);
    return sol;
  }

  const LinearProgram& lp_;
  Tolerances tol_;
  int n_;
  int m_;
  BasisFactor factor_;

  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> phase_cost_;
  double dual_tol_ = 1e-9;

  std::vector<BasisStatus> status_;
  std::vector<double> x_;
  std::vector<int> head_;
  std::vector<int> pos_;
  bool bland_ = false;
  bool phase1_ = false;
  std::int64_t iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  lp.validate();
  Simplex simplex(lp, tol);
  return simplex.run(nullptr);
}

LpSolution solve_lp_from(const LinearProgram& lp, const Basis& start,
                         const Tolerances& tol) {
  lp.validate();
  Simplex simplex(lp, tol);
  return simplex.run(&start);
}

}  // namespace windadm::lp
