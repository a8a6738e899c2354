#include "gasket_plap/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gasket_plap/errors.hpp"

namespace gplap {

void ProblemSpec::validate_constants() const {
  if (!(a > 0.0)) throw InvariantError("requires a > 0");
  if (!(b > 0.0)) throw InvariantError("requires b > 0");
  if (!(k > 0.0)) throw InvariantError("requires k > 0");
  if (!(lambda > 0.0)) throw InvariantError("requires lambda > 0");
  if (!(p > 1.0)) throw InvariantError("requires p > 1");
  if (!(q > 1.0 && q < p)) throw InvariantError("requires 1 < q < p");
  if (!(p * (k + 1.0) < l)) throw InvariantError("requires p(k+1) < l");
  if (level < 0) throw InvariantError("requires a nonnegative level");
}

void ProblemSpec::validate(const GasketLevel& g) const {
  validate_constants();
  if (g.level() != level) throw DimensionError("problem spec level does not match gasket level");
  if (f_values.size() != g.vertex_count()) throw DimensionError("f samples do not match gasket vertex count");
  if (g_values.size() != g.vertex_count()) throw DimensionError("g samples do not match gasket vertex count");
}

ProblemSpec ProblemSpec::with_lambda(double new_lambda) const {
  ProblemSpec s = *this;
  s.lambda = new_lambda;
  return s;
}

const char* to_string(NehariTag tag) {
  switch (tag) {
    case NehariTag::Plus:
      return "Plus";
    case NehariTag::Zero:
      return "Zero";
    case NehariTag::Minus:
      return "Minus";
    case NehariTag::NotMember:
      return "NotMember";
  }
  return "?";
}

double kirchhoff(double t, const ProblemSpec& spec) {
  if (t < 0.0) throw PreconditionError("kirchhoff requires t >= 0");
  return spec.a * std::pow(t, spec.k) + spec.b;
}

double mhat(double s, const ProblemSpec& spec) {
  if (s < 0.0) throw PreconditionError("mhat requires s >= 0");
  return spec.a * std::pow(s, spec.k + 1.0) / (spec.k + 1.0) + spec.b * s;
}

namespace {

double weighted_power_integral(std::span<const double> u, std::span<const double> coeff, double expo,
                               const GasketLevel& g) {
  if (u.size() != g.vertex_count() || coeff.size() != g.vertex_count()) {
    throw DimensionError("level mismatch between function, coefficient and gasket");
  }
  const auto w = g.weights();
  double s = 0.0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (u[v] != 0.0) s += w[v] * coeff[v] * std::pow(std::abs(u[v]), expo);
  }
  return s;
}

}  // namespace

double f_integral(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g) {
  require_same_level(u, g);
  return weighted_power_integral(u.values(), spec.f_values, spec.q, g);
}

double g_integral(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g) {
  require_same_level(u, g);
  return weighted_power_integral(u.values(), spec.g_values, spec.l, g);
}

double l1_norm(const GasketLevel& g, std::span<const double> c) {
  if (c.size() != g.vertex_count()) throw DimensionError("l1_norm: length mismatch");
  const auto w = g.weights();
  double s = 0.0;
  for (std::size_t v = 0; v < c.size(); ++v) s += w[v] * std::abs(c[v]);
  return s;
}

FunctionalTerms functional_terms(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                                 const EnergyModel& em) {
  FunctionalTerms t;
  t.energy = renormalized_energy(u, g, em);
  t.F = weighted_power_integral(u, spec.f_values, spec.q, g);
  t.G = weighted_power_integral(u, spec.g_values, spec.l, g);
  return t;
}

FunctionalTerms functional_terms(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                                 const EnergyModel& em) {
  require_same_level(u, g);
  return functional_terms(u.values(), spec, g, em);
}

double euler_functional(const FunctionalTerms& t, const ProblemSpec& spec) {
  return mhat(t.energy, spec) / spec.p - spec.lambda / spec.q * t.F - t.G / spec.l;
}

double euler_functional(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                        const EnergyModel& em) {
  if (!u.dirichlet()) throw PreconditionError("euler_functional requires a Dirichlet function");
  return euler_functional(functional_terms(u, spec, g, em), spec);
}

double euler_on_nehari_without_g(const FunctionalTerms& t, const ProblemSpec& spec) {
  const double pk1 = spec.p * (spec.k + 1.0);
  const double A = spec.a * std::pow(t.energy, spec.k + 1.0);
  const double B = spec.b * t.energy;
  return (1.0 / pk1 - 1.0 / spec.l) * A + (1.0 / spec.p - 1.0 / spec.l) * B -
         (1.0 / spec.q - 1.0 / spec.l) * spec.lambda * t.F;
}

double euler_on_nehari_without_f(const FunctionalTerms& t, const ProblemSpec& spec) {
  const double pk1 = spec.p * (spec.k + 1.0);
  const double A = spec.a * std::pow(t.energy, spec.k + 1.0);
  const double B = spec.b * t.energy;
  return (1.0 / pk1 - 1.0 / spec.q) * A + (1.0 / spec.p - 1.0 / spec.q) * B +
         (1.0 / spec.q - 1.0 / spec.l) * t.G;
}

double nehari_residual(const FunctionalTerms& t, const ProblemSpec& spec) {
  return kirchhoff(t.energy, spec) * t.energy - spec.lambda * t.F - t.G;
}

double nehari_residual(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                       const EnergyModel& em) {
  if (u.is_zero()) throw DegenerateInputError("the Nehari set excludes u = 0");
  return nehari_residual(functional_terms(u, spec, g, em), spec);
}

double phi2_f_form(const FunctionalTerms& t, const ProblemSpec& spec) {
  const double pk1 = spec.p * (spec.k + 1.0);
  const double A = spec.a * std::pow(t.energy, spec.k + 1.0);
  const double B = spec.b * t.energy;
  return (pk1 - spec.l) * A + (spec.p - spec.l) * B + spec.lambda * (spec.l - spec.q) * t.F;
}

double phi2_g_form(const FunctionalTerms& t, const ProblemSpec& spec) {
  const double pk1 = spec.p * (spec.k + 1.0);
  const double A = spec.a * std::pow(t.energy, spec.k + 1.0);
  const double B = spec.b * t.energy;
  return (pk1 - spec.q) * A + (spec.p - spec.q) * B + (spec.q - spec.l) * t.G;
}

NehariClass classify(const FunctionalTerms& t, const ProblemSpec& spec, double tol) {
  NehariClass c;
  c.residual = nehari_residual(t, spec);
  c.scale = std::max(kirchhoff(t.energy, spec) * t.energy + std::abs(spec.lambda * t.F) + std::abs(t.G),
                     std::numeric_limits<double>::min());
  c.phi2 = phi2_f_form(t, spec);
  if (std::abs(c.residual) > tol * c.scale) {
    c.tag = NehariTag::NotMember;
  } else if (c.phi2 > tol * c.scale) {
    c.tag = NehariTag::Plus;
  } else if (c.phi2 < -tol * c.scale) {
    c.tag = NehariTag::Minus;
  } else {
    c.tag = NehariTag::Zero;
  }
  return c;
}

NehariClass classify(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g, const EnergyModel& em,
                     double tol) {
  if (u.is_zero()) throw DegenerateInputError("the Nehari set excludes u = 0");
  return classify(functional_terms(u, spec, g, em), spec, tol);
}

Thresholds thresholds(const ProblemSpec& spec, double K, double f_norm, double g_norm) {
  spec.validate_constants();
  if (!(K > 0.0)) throw PreconditionError("thresholds require K > 0");
  if (!(f_norm > 0.0) || !(g_norm > 0.0)) throw PreconditionError("thresholds require positive coefficient norms");

  const double p = spec.p;
  const double q = spec.q;
  const double l = spec.l;
  const double a = spec.a;
  const double b = spec.b;
  const double pk1 = p * (spec.k + 1.0);
  const double Kq = std::pow(K, q);
  const double Kl = std::pow(K, l);

  Thresholds t;
  t.K_used = K;
  t.f_norm = f_norm;
  t.g_norm = g_norm;

  const double base_a = (pk1 - q) * a / (g_norm * Kl * (l - q));
  const double base_b = (p - q) * b / (g_norm * Kl * (l - q));
  t.lambda2 = std::pow(base_a, (pk1 - q) / (l - pk1)) * ((l - pk1) * a / ((l - q) * f_norm * Kq));
  t.lambda3 = std::pow(base_b, (p - q) / (l - p)) * ((l - p) * b / ((l - q) * f_norm * Kq));
  t.lambda1 = std::min(t.lambda2, t.lambda3);
  t.lambda_hat1 = std::min(q / p * t.lambda3, q / pk1 * t.lambda2);

  // Norm floors on the minus branch and the matching lower bounds for I.
  const double floor_b = std::pow(base_b, 1.0 / (l - p));
  const double floor_a = std::pow(base_a, 1.0 / (l - pk1));
  t.minus_norm_floor = std::max(floor_a, floor_b);

  const double f_term = (1.0 / q - 1.0 / l) * spec.lambda * f_norm * Kq;
  double delta = -std::numeric_limits<double>::infinity();
  if (spec.lambda < q / p * t.lambda3) {
    delta = std::max(delta, std::pow(floor_b, q) * ((1.0 / p - 1.0 / l) * b * std::pow(floor_b, p - q) - f_term));
  }
  if (spec.lambda < q / pk1 * t.lambda2) {
    delta = std::max(delta, std::pow(floor_a, q) * ((1.0 / pk1 - 1.0 / l) * a * std::pow(floor_a, pk1 - q) - f_term));
  }
  t.delta1 = std::isfinite(delta) ? delta : std::numeric_limits<double>::quiet_NaN();
  return t;
}

std::vector<std::pair<double, double>> coercivity_probe(const ProblemSpec& spec, const GasketLevel& g,
                                                        const EnergyModel& em, const FractalFunction& u,
                                                        std::span<const double> t_grid) {
  if (u.is_zero()) throw DegenerateInputError("coercivity probe requires u != 0");
  const FunctionalTerms base = functional_terms(u, spec, g, em);
  std::vector<std::pair<double, double>> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const double at = std::abs(t);
    FunctionalTerms s{base.energy * std::pow(at, spec.p), base.F * std::pow(at, spec.q), base.G * std::pow(at, spec.l)};
    rows.emplace_back(t, euler_functional(s, spec));
  }
  return rows;
}

}  // namespace gplap
