#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gasket_plap/fibering.hpp"
#include "gasket_plap/gasket.hpp"

namespace gplap::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult rp_recovery();
CriterionResult harmonic_extension();
CriterionResult energy_calculus();
CriterionResult embedding_constant();
CriterionResult threshold_algebra();
CriterionResult fibering_correctness();
CriterionResult two_solution_run();
CriterionResult m0_emptiness();
CriterionResult continuity_diagnostic();
CriterionResult determinism();

/// All ten criteria in order.
std::vector<CriterionResult> run_all();

/// One line per criterion: `[PASS] 7 two-solution run (12.3 s): detail`.
void print_table(const std::vector<CriterionResult>& results, std::ostream& os);

/// Reference values and independent reference computations.
namespace oracle {

/// 30-digit evaluations of the threshold closed forms at
/// p=2, q=1.5, l=5, k=1, a=b=1, K=f_norm=g_norm=1.
inline constexpr double kLambda2 = 0.123200328677626323252;
inline constexpr double kLambda3 = 0.619731451199557522504;
inline constexpr double kLambdaHat1 = 0.0462001232541098712195;

/// r_3 from the level-7 to level-6 ratio of minimal boundary energies,
/// computed by a separate sparse Newton solver.
inline constexpr double kR3Level7 = 0.289349965621;

/// Level-1 crude minimal energy with boundary (0, 0, 1) at p = 2 from the
/// 3x3 normal equations, divided by the level-0 energy 2.
double rp_level1_p2();

/// Values at the level-1 midpoints (m12, m23, m13) of the discrete
/// harmonic extension of boundary data (x1, x2, x3), via a 3x3 solve.
std::array<double, 3> harmonic_midpoints_p2(double x1, double x2, double x3);

/// K at level 1, p = 2: the symmetric one-parameter minimization of the
/// crude energy with u(m12) = 1, done by golden-section search.
double k1_p2();

struct GridRoot {
  double t = 0.0;
  bool local_min = false;  ///< phi' changes sign from - to +
};

/// Positive zeros of phi' from sign changes on a dense log grid over
/// [t_lo, t_hi], refined by bisection; a near-tangency of the reduced
/// derivative phi'(t)/t^{q-1} to zero between grid points is resolved by
/// golden-section search on the grid's best bracket.
std::vector<GridRoot> dense_grid_roots(const FiberingProfile& f, double t_lo, double t_hi, int n = 20000);

}  // namespace oracle

}  // namespace gplap::validation
