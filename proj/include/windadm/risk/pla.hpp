#pragma once

#include <iosfwd>
#include <vector>

#include "windadm/grid/network.hpp"
#include "windadm/risk/error_model.hpp"
#include "windadm/risk/risk.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::risk {

// Confidence ladder on the lower tail. alpha0 is the outermost level, then
// the listed alphas; the upper tail mirrors them as 1 - alpha. Between the
// innermost level and zero error sits one more PDF piece, so each side has
// alphas.size() + 1 pieces, each split into z chords.
struct PlaConfig {
  double alpha0 = 0.001;
  std::vector<double> alphas{0.005, 0.025, 0.495};
  int z = 4;

  int pieces() const { return static_cast<int>(alphas.size()) + 1; }
};

struct Cut {
  double a = 0.0;  // $/MW
  double b = 0.0;  // $
};

// Cuts are ordered (s, z) within each farm and period.
struct PlaCoefficients {
  int farms = 0;
  int horizon = 0;
  int pieces = 0;
  int z = 0;
  std::vector<std::vector<std::vector<Cut>>> upper;  // Q^p >= a w^u + b
  std::vector<std::vector<std::vector<Cut>>> lower;  // Q^n >= a w^l + b
  // Chord endpoints in error space and the PLA expected excess there.
  std::vector<std::vector<std::vector<double>>> f_upper, e_upper;
  std::vector<std::vector<std::vector<double>>> f_lower, e_lower;

  int cuts_per_side() const { return pieces * z; }
};

// Throws kNonMonotoneLadder unless 0 <= alpha0 < alphas[0] < ... and, in
// every farm-period with positive spread, Y^-1(alpha_S) < 0 < Y^-1(1 - alpha_S).
PlaCoefficients build_pla(const ErrorModel& em, const PlaConfig& cfg,
                          const grid::PriceSchedule& prices);

// Q = max(0, max over cuts); the zero floor is the master's Q >= 0 bound.
RiskValue risk_pla(const uncertainty::Boundary& b, const PlaCoefficients& pc);

// CSV `farm,period,s,z,a_p,b_p,a_n,b_n` with 1-based farm and period.
void write_pla_csv(std::ostream& out, const PlaCoefficients& pc);

}  // namespace windadm::risk
