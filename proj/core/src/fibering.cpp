#include "gasket_plap/fibering.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gasket_plap/errors.hpp"

namespace gplap {

const char* to_string(FiberingCase c) {
  switch (c) {
    case FiberingCase::I:
      return "I";
    case FiberingCase::II:
      return "II";
    case FiberingCase::III:
      return "III";
    case FiberingCase::IV:
      return "IV";
  }
  return "?";
}

const char* to_string(RootKind k) {
  switch (k) {
    case RootKind::LocalMin:
      return "LocalMin";
    case RootKind::LocalMax:
      return "LocalMax";
    case RootKind::Inflection:
      return "Inflection";
  }
  return "?";
}

const char* to_string(RootRegime r) {
  switch (r) {
    case RootRegime::Regular:
      return "Regular";
    case RootRegime::NoRootPair:
      return "NoRootPair";
    case RootRegime::DegenerateContact:
      return "DegenerateContact";
  }
  return "?";
}

FiberingProfile FiberingProfile::scaled(double c) const {
  FiberingProfile s = *this;
  s.A *= std::pow(c, pk1());
  s.B *= std::pow(c, p);
  s.F *= std::pow(c, q);
  s.G *= std::pow(c, l);
  return s;
}

FiberingProfile make_profile(const FunctionalTerms& t, const ProblemSpec& spec) {
  FiberingProfile prof;
  prof.A = spec.a * std::pow(t.energy, spec.k + 1.0);
  prof.B = spec.b * t.energy;
  prof.F = t.F;
  prof.G = t.G;
  prof.p = spec.p;
  prof.q = spec.q;
  prof.l = spec.l;
  prof.k = spec.k;
  prof.lambda = spec.lambda;
  if (prof.A == 0.0 && prof.B == 0.0) throw DegenerateInputError("fibering profile of the zero function");
  return prof;
}

FiberingProfile profile(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                        const EnergyModel& em) {
  if (u.is_zero()) throw DegenerateInputError("fibering profile requires u != 0");
  return make_profile(functional_terms(u, spec, g, em), spec);
}

double phi(double t, const FiberingProfile& f) {
  if (!(t > 0.0)) throw PreconditionError("phi requires t > 0");
  const double pk1 = f.pk1();
  return f.A / pk1 * std::pow(t, pk1) + f.B / f.p * std::pow(t, f.p) - f.lambda * f.F / f.q * std::pow(t, f.q) -
         f.G / f.l * std::pow(t, f.l);
}

double phi_prime(double t, const FiberingProfile& f) {
  if (!(t > 0.0)) throw PreconditionError("phi' requires t > 0");
  const double pk1 = f.pk1();
  return f.A * std::pow(t, pk1 - 1.0) + f.B * std::pow(t, f.p - 1.0) - f.lambda * f.F * std::pow(t, f.q - 1.0) -
         f.G * std::pow(t, f.l - 1.0);
}

double phi_double_prime(double t, const FiberingProfile& f) {
  if (!(t > 0.0)) throw PreconditionError("phi'' requires t > 0");
  const double pk1 = f.pk1();
  return (pk1 - 1.0) * f.A * std::pow(t, pk1 - 2.0) + (f.p - 1.0) * f.B * std::pow(t, f.p - 2.0) -
         (f.q - 1.0) * f.lambda * f.F * std::pow(t, f.q - 2.0) - (f.l - 1.0) * f.G * std::pow(t, f.l - 2.0);
}

double phi_prime_scale(double t, const FiberingProfile& f) {
  const double pk1 = f.pk1();
  return f.A * std::pow(t, pk1 - 1.0) + f.B * std::pow(t, f.p - 1.0) +
         std::abs(f.lambda * f.F) * std::pow(t, f.q - 1.0) + std::abs(f.G) * std::pow(t, f.l - 1.0);
}

FiberingCase classify_case(const FiberingProfile& prof) {
  const bool f_pos = prof.lambda * prof.F > 0.0;
  const bool g_pos = prof.G > 0.0;
  if (!f_pos && !g_pos) return FiberingCase::I;
  if (f_pos && !g_pos) return FiberingCase::II;
  if (!f_pos && g_pos) return FiberingCase::III;
  return FiberingCase::IV;
}

namespace {

// phi'(t) / t^{q-1}: same zeros as phi' on t > 0, finite at t -> 0+.
double reduced(double t, const FiberingProfile& f) {
  return f.A * std::pow(t, f.pk1() - f.q) + f.B * std::pow(t, f.p - f.q) - f.lambda * f.F -
         f.G * std::pow(t, f.l - f.q);
}

// t^{1-(p-q)} times the derivative of `reduced`; one sign change from + to -.
double reduced_slope(double t, const FiberingProfile& f) {
  const double a = f.pk1() - f.q;
  const double b = f.p - f.q;
  const double c = f.l - f.q;
  return a * f.A * std::pow(t, a - b) + b * f.B - c * f.G * std::pow(t, c - b);
}

double reduced_scale(double t, const FiberingProfile& f) {
  return f.A * std::pow(t, f.pk1() - f.q) + f.B * std::pow(t, f.p - f.q) + std::abs(f.lambda * f.F) +
         std::abs(f.G) * std::pow(t, f.l - f.q);
}

// Geometric bisection for a sign change of `fn` on [lo, hi]; `fn(lo)` and
// `fn(hi)` must differ in sign.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return std::sqrt(lo) * std::sqrt(hi);
}

// Expands from t0 by factors of 4 until pred holds.
template <class Pred>
double expand(double t0, bool upward, Pred&& pred) {
  double t = t0;
  for (int i = 0; i < 600; ++i) {
    if (pred(t)) return t;
    t = upward ? t * 4.0 : t / 4.0;
    if (!(t > 0.0) || !std::isfinite(t)) break;
  }
  throw ConvergenceError("fibering root bracket could not be established", t);
}

double natural_scale(const FiberingProfile& f) {
  if (f.G > 0.0 && f.B > 0.0) {
    const double t = std::pow(f.B / f.G, 1.0 / (f.l - f.p));
    if (std::isfinite(t) && t > 0.0) return t;
  }
  return 1.0;
}

double polish(double t, double lo, double hi, const FiberingProfile& f) {
  for (int i = 0; i < 3; ++i) {
    const double d1 = phi_prime(t, f);
    const double d2 = phi_double_prime(t, f);
    if (d2 == 0.0 || !std::isfinite(d2)) break;
    const double next = t - d1 / d2;
    if (!(next > lo && next < hi)) break;
    if (std::abs(phi_prime(next, f)) > std::abs(d1)) break;
    t = next;
  }
  return t;
}

}  // namespace

FiberingRoots find_roots(const FiberingProfile& f, double tol) {
  if (f.A < 0.0 || f.B < 0.0 || (f.A == 0.0 && f.B == 0.0)) {
    throw PreconditionError("fibering profile requires A, B >= 0, not both zero");
  }
  FiberingRoots out;
  out.case_tag = classify_case(f);
  const double t0 = natural_scale(f);
  auto red = [&](double t) { return reduced(t, f); };

  auto add_root = [&](double lo, double hi, RootKind kind) {
    double t = bisect(red, lo, hi);
    t = polish(t, lo, hi, f);
    const double resid = std::abs(phi_prime(t, f));
    if (resid > tol * phi_prime_scale(t, f)) {
      throw ConvergenceError("fibering root tolerance not reachable at t = " + std::to_string(t), resid);
    }
    out.roots.push_back({t, kind});
  };

  switch (out.case_tag) {
    case FiberingCase::I:
      return out;
    case FiberingCase::II: {
      // reduced() increases from -lambda F < 0 to +infinity.
      const double lo = expand(t0, false, [&](double t) { return red(t) < 0.0; });
      const double hi = expand(t0, true, [&](double t) { return red(t) > 0.0; });
      add_root(lo, hi, RootKind::LocalMin);
      return out;
    }
    case FiberingCase::III:
    case FiberingCase::IV: {
      auto slope = [&](double t) { return reduced_slope(t, f); };
      const double slo = expand(t0, false, [&](double t) { return slope(t) > 0.0; });
      const double shi = expand(t0, true, [&](double t) { return slope(t) < 0.0; });
      const double tc = bisect(slope, slo, shi);
      const double peak = red(tc);
      const double hi = expand(tc * 4.0, true, [&](double t) { return red(t) < 0.0; });
      if (out.case_tag == FiberingCase::III) {
        // reduced() starts at -lambda F >= 0, peaks at tc, then falls to -infinity.
        add_root(tc, hi, RootKind::LocalMax);
        return out;
      }
      const double deg_tol = 1e-13 * reduced_scale(tc, f);
      if (std::abs(peak) <= deg_tol) {
        out.regime = RootRegime::DegenerateContact;
        out.roots.push_back({tc, RootKind::Inflection});
        return out;
      }
      if (peak < 0.0) {
        out.regime = RootRegime::NoRootPair;
        return out;
      }
      const double lo = expand(tc / 4.0, false, [&](double t) { return red(t) < 0.0; });
      add_root(lo, tc, RootKind::LocalMin);
      add_root(tc, hi, RootKind::LocalMax);
      return out;
    }
  }
  return out;
}

namespace {

std::string projection_failure(const FiberingRoots& r, const FiberingProfile& f, const char* branch) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "no %s-branch root: case %s, regime %s, lambda = %.17g", branch,
                to_string(r.case_tag), to_string(r.regime), f.lambda);
  return buf;
}

}  // namespace

double plus_scale(const FiberingProfile& f, double tol) {
  const FiberingRoots r = find_roots(f, tol);
  for (const auto& root : r.roots) {
    if (root.kind == RootKind::LocalMin) return root.t;
  }
  throw ProjectionUnavailable(projection_failure(r, f, "plus"));
}

double minus_scale(const FiberingProfile& f, double tol) {
  const FiberingRoots r = find_roots(f, tol);
  for (const auto& root : r.roots) {
    if (root.kind == RootKind::LocalMax) return root.t;
  }
  throw ProjectionUnavailable(projection_failure(r, f, "minus"));
}

FractalFunction project_plus(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                             const EnergyModel& em) {
  return u.scaled(plus_scale(profile(u, spec, g, em)));
}

FractalFunction project_minus(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                              const EnergyModel& em) {
  return u.scaled(minus_scale(profile(u, spec, g, em)));
}

void write_fibering_csv(const FiberingProfile& prof, std::span<const double> t_grid, std::ostream& os) {
  os << "t,phi,dphi,ddphi\n";
  char buf[160];
  for (double t : t_grid) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, phi(t, prof), phi_prime(t, prof),
                  phi_double_prime(t, prof));
    os << buf;
  }
}

}  // namespace gplap
