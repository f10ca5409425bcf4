#include "windadm/lp/lp_dump.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace windadm::lp {
namespace {

std::string_view relation_tag(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "le";
    case Relation::kEqual: return "eq";
    case Relation::kGreaterEqual: return "ge";
  }
  return "le";
}

void dump(std::ostream& out, const LinearProgram& lp, const MilpProblem* milp) {
  fmt::print(out, "sense {}\n", lp.sense() == Sense::kMinimize ? "min" : "max");
  fmt::print(out, "offset {}\n", lp.objective_offset());
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variable(j);
    const bool integer = milp != nullptr && milp->is_integer(j);
    fmt::print(out, "var {} {} {} {} {} {}\n", j, v.lower, v.upper, v.objective,
               integer ? "int" : "cont", v.name);
  }
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const auto& row = lp.constraint(i);
    fmt::print(out, "row {} {} {} {}", i, relation_tag(row.relation), row.rhs,
               row.terms.size());
    for (const Term& t : row.terms) fmt::print(out, " {}:{}", t.var, t.coef);
    fmt::print(out, " {}\n", row.name);
  }
}

}  // namespace

void write_lp_text(std::ostream& out, const LinearProgram& lp) {
  dump(out, lp, nullptr);
}

void write_lp_text(std::ostream& out, const MilpProblem& milp) {
  dump(out, milp.lp(), &milp);
}

}  // namespace windadm::lp
