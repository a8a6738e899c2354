#pragma once

#include <span>
#include <vector>

#include "gasket_plap/convex.hpp"
#include "gasket_plap/gasket.hpp"

namespace gplap {

/// Exponent p, renormalization factor r_p and working level.
struct EnergyModel {
  double p = 2.0;
  double r_p = 0.6;
  int level = 0;
  /// Convergence tolerance used when r_p was estimated.
  double rp_tolerance = 0.0;

  /// Validates 0 < r_p < 1 and p > 1.
  static EnergyModel make(double p, double r_p, int level, double rp_tolerance = 0.0);
  void check() const;

  friend bool operator==(const EnergyModel&, const EnergyModel&) = default;
};

struct EnergyReport {
  double crude = 0.0;
  double renormalized = 0.0;
  double norm = 0.0;  ///< renormalized^{1/p}
};

/// Cell energy density |x1-x2|^p + |x2-x3|^p + |x3-x1|^p.
double a_p(double x1, double x2, double x3, double p);

double crude_energy(const FractalFunction& u, const GasketLevel& g, double p);
double crude_energy(std::span<const double> u, const GasketLevel& g, double p);

EnergyReport renormalized_energy(const FractalFunction& u, const GasketLevel& g, const EnergyModel& em);
double renormalized_energy(std::span<const double> u, const GasketLevel& g, const EnergyModel& em);

/// Minimal-energy extension of a level-m function to level m+1, one coarse
/// cell at a time. `coarse` and `fine` must be consecutive levels built on
/// the same corners. Dirichlet-ness is inherited.
FractalFunction extend_pharmonic(const FractalFunction& u, const GasketLevel& coarse, const GasketLevel& fine,
                                 double p, const ConvexSolveOptions& opts = {});

/// Values for the three new vertices of one cell with corner values x.
std::array<double, 3> extend_cell(const std::array<double, 3>& x, double p, const ConvexSolveOptions& opts = {});

struct RpEstimate {
  double r_p = 0.0;
  double tolerance = 0.0;
  int levels_used = 0;
  /// Successive ratios rho_{m+1} / rho_m, m = 0, 1, ...
  std::vector<double> ratios;
};

/// Ratio iteration on minimal crude energies with boundary data (0, 0, 1).
/// Stops when successive ratios differ by less than `tol`.
RpEstimate estimate_rp_detailed(double p, double tol, int max_level = 12);
double estimate_rp(double p, double tol);

/// Minimal crude level-m energy over all extensions of boundary data (0,0,1),
/// together with the minimizer.
double minimal_boundary_energy(const GasketLevel& g, double p, std::vector<double>* minimizer = nullptr,
                               const std::vector<double>* warm_start = nullptr);

/// Gradient of the renormalized energy with respect to every vertex value.
std::vector<double> energy_gradient(const FractalFunction& u, const GasketLevel& g, const EnergyModel& em);
std::vector<double> energy_gradient(std::span<const double> u, const GasketLevel& g, const EnergyModel& em);

/// (1/p) d/dt E(u + t v) at t = 0.
double energy_form(const FractalFunction& u, const FractalFunction& v, const GasketLevel& g, const EnergyModel& em);

struct EmbeddingResult {
  double K = 0.0;
  VertexId argmax = 0;
  /// Dirichlet function with sup-norm 1 attaining ||u||_inf = K ||u||_E.
  FractalFunction extremal;
  /// Smallest renormalized energy among unit-peak functions.
  double min_energy = 0.0;
};

/// Sharp discrete Dirichlet embedding constant ||u||_inf <= K ||u||_E at
/// the level of `g`. Requires level >= 1.
EmbeddingResult embedding_extremal(const GasketLevel& g, const EnergyModel& em, const ConvexSolveOptions& opts = {});
double embedding_constant(const GasketLevel& g, const EnergyModel& em);

}  // namespace gplap
