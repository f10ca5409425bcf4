#include "windadm/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::lp {

int LinearProgram::add_variable(double lower, double upper, double objective,
                                std::string name) {
  vars_.push_back(Variable{lower, upper, objective, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                  double rhs, std::string name) {
  rows_.push_back(Constraint{std::move(terms), relation, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = vars_.at(var);
  v.lower = lower;
  v.upper = upper;
}

double LinearProgram::evaluate_objective(const std::vector<double>& x) const {
  double value = offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) value += vars_[j].objective * x[j];
  return value;
}

std::vector<double> LinearProgram::row_activities(
    const std::vector<double>& x) const {
  std::vector<double> act(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const Term& t : rows_[i].terms) act[i] += t.coef * x[t.var];
  }
  return act;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lower - x[j], x[j] - vars_[j].upper});
  }
  const auto act = row_activities(x);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double gap = act[i] - rows_[i].rhs;
    switch (rows_[i].relation) {
      case Relation::kLessEqual: worst = std::max(worst, gap); break;
      case Relation::kGreaterEqual: worst = std::max(worst, -gap); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    const auto& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInf ||
        v.upper == -kInf || v.lower > v.upper) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("variable {} has invalid bounds [{}, {}]", j,
                              v.lower, v.upper));
    }
    if (!std::isfinite(v.objective)) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("variable {} has non-finite objective", j));
    }
  }
  if (!std::isfinite(offset_)) {
    throw Error(ErrorCode::kMalformedInput, "non-finite objective offset");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    if (!std::isfinite(row.rhs)) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("row {} has non-finite rhs", i));
    }
    for (const Term& t : row.terms) {
      if (t.var < 0 || t.var >= n) {
        throw Error(ErrorCode::kMalformedInput,
                    fmt::format("row {} references undeclared variable {}", i,
                                t.var));
      }
      if (!std::isfinite(t.coef)) {
        throw Error(ErrorCode::kMalformedInput,
                    fmt::format("row {} has non-finite coefficient", i));
      }
    }
  }
}

int MilpProblem::add_variable(double lower, double upper, double objective,
                              std::string name, bool integer) {
  const int j = lp_.add_variable(lower, upper, objective, std::move(name));
  integer_.resize(lp_.num_variables(), false);
  integer_[j] = integer;
  return j;
}

void MilpProblem::set_integer(int var, bool integer) {
  if (var < 0 || var >= lp_.num_variables()) {
    throw Error(ErrorCode::kMalformedInput,
                fmt::format("integrality flag on undeclared variable {}", var));
  }
  integer_.resize(lp_.num_variables(), false);
  integer_[var] = integer;
}

void MilpProblem::validate() const {
  lp_.validate();
  for (std::size_t j = 0; j < integer_.size(); ++j) {
    if (!integer_[j]) continue;
    const auto& v = lp_.variable(static_cast<int>(j));
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("integer variable {} is not finitely bounded", j));
    }
  }
}

}  // namespace windadm::lp
