#pragma once

#include <limits>
#include <string>
#include <vector>

namespace windadm::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
  std::string name;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// A linear program over bounded real variables:
//
//   min|max  c'x + offset
//   s.t.     a_i'x (<=|=|>=) b_i     for every constraint i
//            l <= x <= u             (either side may be infinite)
//
// Rows are stored densely by term list; duplicate variable indices inside a
// row are summed when the problem is handed to the solver.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::kMinimize) : sense_(sense) {}

  int add_variable(double lower, double upper, double objective = 0.0,
                   std::string name = {});
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                     std::string name = {});

  void set_sense(Sense sense) { sense_ = sense; }
  void set_objective(int var, double coef) { vars_.at(var).objective = coef; }
  void set_bounds(int var, double lower, double upper);
  void set_objective_offset(double offset) { offset_ = offset; }

  Sense sense() const { return sense_; }
  double objective_offset() const { return offset_; }
  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return vars_.at(j); }
  const Constraint& constraint(int i) const { return rows_.at(i); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  Constraint& mutable_constraint(int i) { return rows_.at(i); }

  // c'x + offset for an arbitrary point.
  double evaluate_objective(const std::vector<double>& x) const;
  // a_i'x for every row.
  std::vector<double> row_activities(const std::vector<double>& x) const;
  // Largest bound or row violation of x (0 when feasible).
  double max_violation(const std::vector<double>& x) const;

  // Throws Error(kMalformedInput) when a row references an undeclared
  // variable, a bound pair is inverted, or any number is NaN / infinite where
  // it must be finite.
  void validate() const;

 private:
  Sense sense_;
  double offset_ = 0.0;
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

// Adds integrality flags. Integer variables must have finite bounds.
class MilpProblem {
 public:
  MilpProblem() = default;
  explicit MilpProblem(LinearProgram lp)
      : lp_(std::move(lp)), integer_(lp_.num_variables(), false) {}

  LinearProgram& lp() { return lp_; }
  const LinearProgram& lp() const { return lp_; }

  int add_variable(double lower, double upper, double objective = 0.0,
                   std::string name = {}, bool integer = false);
  int add_binary(double objective = 0.0, std::string name = {}) {
    return add_variable(0.0, 1.0, objective, std::move(name), true);
  }
  void set_integer(int var, bool integer = true);
  bool is_integer(int var) const {
    return var >= 0 && var < static_cast<int>(integer_.size()) && integer_[var];
  }
  const std::vector<bool>& integrality() const { return integer_; }

  void validate() const;

 private:
  LinearProgram lp_;
  std::vector<bool> integer_;
};

}  // namespace windadm::lp
