#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "gasket_plap/functional.hpp"

namespace gplap {

/// Coefficients of phi_u(t) = I(t u):
///   phi(t) = A t^{p(k+1)} / (p(k+1)) + B t^p / p - lambda F t^q / q - G t^l / l
/// with A = a ||u||^{p(k+1)}, B = b ||u||^p.
struct FiberingProfile {
  double A = 0.0;
  double B = 0.0;
  double F = 0.0;
  double G = 0.0;
  double p = 2.0;
  double q = 1.5;
  double l = 5.0;
  double k = 1.0;
  double lambda = 0.0;

  double pk1() const noexcept { return p * (k + 1.0); }
  /// Profile of c u in terms of this one.
  FiberingProfile scaled(double c) const;
};

enum class FiberingCase { I, II, III, IV };
enum class RootKind { LocalMin, LocalMax, Inflection };
enum class RootRegime {
  Regular,
  NoRootPair,        ///< Case IV with lambda too large: the two roots are gone
  DegenerateContact  ///< Case IV double root, phi' = phi'' = 0
};

const char* to_string(FiberingCase c);
const char* to_string(RootKind k);
const char* to_string(RootRegime r);

struct FiberingRoot {
  double t = 0.0;
  RootKind kind = RootKind::LocalMin;
};

struct FiberingRoots {
  FiberingCase case_tag = FiberingCase::I;
  RootRegime regime = RootRegime::Regular;
  std::vector<FiberingRoot> roots;  ///< increasing in t
};

FiberingProfile make_profile(const FunctionalTerms& t, const ProblemSpec& spec);
FiberingProfile profile(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                        const EnergyModel& em);

double phi(double t, const FiberingProfile& prof);
double phi_prime(double t, const FiberingProfile& prof);
double phi_double_prime(double t, const FiberingProfile& prof);

/// Sum of the absolute values of the terms of phi'(t); the scale against
/// which root accuracy is measured.
double phi_prime_scale(double t, const FiberingProfile& prof);

FiberingCase classify_case(const FiberingProfile& prof);

/// All positive zeros of phi'. Accuracy: |phi'(t*)| <= tol * phi_prime_scale(t*).
FiberingRoots find_roots(const FiberingProfile& prof, double tol = 1e-12);

/// Scale t* > 0 with t* u on the plus (local minimum) or minus (local
/// maximum) branch. Throws ProjectionUnavailable naming the case and regime.
double plus_scale(const FiberingProfile& prof, double tol = 1e-12);
double minus_scale(const FiberingProfile& prof, double tol = 1e-12);

FractalFunction project_plus(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                             const EnergyModel& em);
FractalFunction project_minus(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                              const EnergyModel& em);

/// CSV with header `t,phi,dphi,ddphi`, 17 significant digits.
void write_fibering_csv(const FiberingProfile& prof, std::span<const double> t_grid, std::ostream& os);

}  // namespace gplap
