#pragma once

#include <ostream>

#include "windadm/lp/linear_program.hpp"

namespace windadm::lp {

// Line-oriented text dump for cross-checking with external solvers:
//
//   sense min|max
//   offset <value>
//   var <index> <lower> <upper> <objective> <cont|int> <name>
//   row <index> <le|eq|ge> <rhs> <nterms> <var>:<coef> ... <name>
//
// Numbers use the shortest round-trip representation; infinite bounds are
// written as -inf / inf. Names are written last and may be empty.
void write_lp_text(std::ostream& out, const LinearProgram& lp);
void write_lp_text(std::ostream& out, const MilpProblem& milp);

}  // namespace windadm::lp
