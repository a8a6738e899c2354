#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gasket_plap/energy.hpp"
#include "gasket_plap/gasket.hpp"

namespace gplap {

/// Constants of  -M(||u||^p) Delta_p u = lambda f |u|^{q-2} u + g |u|^{l-2} u
/// with M(t) = a t^k + b, plus vertex samples of f and g at one level.
struct ProblemSpec {
  double a = 1.0;
  double b = 1.0;
  double k = 1.0;
  double p = 2.0;
  double q = 1.5;
  double l = 5.0;
  double lambda = 0.0;
  int level = 0;
  std::vector<double> f_values;
  std::vector<double> g_values;

  /// Checks the scalar constants only; messages name the violated
  /// condition ("requires 1 < q < p", "requires p(k+1) < l", ...).
  void validate_constants() const;
  /// validate_constants() plus coefficient lengths against `g`.
  void validate(const GasketLevel& g) const;

  ProblemSpec with_lambda(double new_lambda) const;
};

enum class NehariTag { Plus, Zero, Minus, NotMember };

const char* to_string(NehariTag tag);

struct NehariClass {
  NehariTag tag = NehariTag::NotMember;
  double residual = 0.0;  ///< M(||u||^p)||u||^p - lambda F - G
  double phi2 = 0.0;      ///< phi_u''(1), F-form
  double scale = 1.0;     ///< M(||u||^p)||u||^p + |lambda F| + |G|, homogeneous in u
};

struct Thresholds {
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda1 = 0.0;
  double lambda_hat1 = 0.0;
  /// Lower bound for I on the minus branch at the problem's lambda; NaN when
  /// neither bound's validity condition holds.
  double delta1 = 0.0;
  double K_used = 0.0;
  double f_norm = 0.0;
  double g_norm = 0.0;
  /// Every minus-branch member has energy norm at least this.
  double minus_norm_floor = 0.0;
};

/// Energy, the two weighted integrals and derived terms of one function.
struct FunctionalTerms {
  double energy = 0.0;  ///< ||u||^p (renormalized energy)
  double F = 0.0;       ///< integral of f |u|^q
  double G = 0.0;       ///< integral of g |u|^l
};

double kirchhoff(double t, const ProblemSpec& spec);
double mhat(double s, const ProblemSpec& spec);

double f_integral(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g);
double g_integral(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g);

/// Integral of |c| over the normalized measure.
double l1_norm(const GasketLevel& g, std::span<const double> c);

FunctionalTerms functional_terms(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                                 const EnergyModel& em);
FunctionalTerms functional_terms(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                                 const EnergyModel& em);

double euler_functional(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                        const EnergyModel& em);
double euler_functional(const FunctionalTerms& t, const ProblemSpec& spec);

/// The functional rewritten with the Nehari constraint eliminating G
/// (`eliminate_g`) or F. Only meaningful on Nehari members.
double euler_on_nehari_without_g(const FunctionalTerms& t, const ProblemSpec& spec);
double euler_on_nehari_without_f(const FunctionalTerms& t, const ProblemSpec& spec);

double nehari_residual(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                       const EnergyModel& em);
double nehari_residual(const FunctionalTerms& t, const ProblemSpec& spec);

/// phi_u''(1) after substituting the Nehari constraint, eliminating G (F-form)
/// or lambda F (G-form).
double phi2_f_form(const FunctionalTerms& t, const ProblemSpec& spec);
double phi2_g_form(const FunctionalTerms& t, const ProblemSpec& spec);

NehariClass classify(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g, const EnergyModel& em,
                     double tol = 1e-9);
NehariClass classify(const FunctionalTerms& t, const ProblemSpec& spec, double tol = 1e-9);

/// lambda thresholds and delta1 at spec.lambda, from the embedding constant
/// K and the coefficient norms.
Thresholds thresholds(const ProblemSpec& spec, double K, double f_norm, double g_norm);

/// I(t u) along a ray, one row per grid value.
std::vector<std::pair<double, double>> coercivity_probe(const ProblemSpec& spec, const GasketLevel& g,
                                                        const EnergyModel& em, const FractalFunction& u,
                                                        std::span<const double> t_grid);

}  // namespace gplap
