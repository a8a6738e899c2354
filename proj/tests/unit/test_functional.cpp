#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gasket_plap/errors.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/functional.hpp"
#include "gasket_plap/validation.hpp"

namespace gplap {
namespace {

struct Fixture {
  GasketLevel g = build_level(3);
  EnergyModel em = EnergyModel::make(2.0, 0.6, 3);
  ProblemSpec spec;

  Fixture() {
    spec.level = 3;
    spec.lambda = 0.02;
    spec.f_values.assign(g.vertex_count(), 1.0);
    spec.g_values.assign(g.vertex_count(), 1.0);
  }

  FractalFunction random_direction(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> v(g.vertex_count());
    for (double& x : v) x = n(rng);
    return FractalFunction::dirichlet_from(g, v);
  }
};

ProblemSpec unit_spec(double a, double b, double k) {
  ProblemSpec s;
  s.a = a;
  s.b = b;
  s.k = k;
  return s;
}

TEST(Kirchhoff, Examples) {
  EXPECT_DOUBLE_EQ(kirchhoff(0.0, unit_spec(1, 1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(kirchhoff(2.0, unit_spec(1, 1, 1)), 3.0);
  EXPECT_DOUBLE_EQ(kirchhoff(3.0, unit_spec(2, 0.5, 2)), 18.5);
}

TEST(Mhat, ExamplesAndDerivative) {
  EXPECT_DOUBLE_EQ(mhat(0.0, unit_spec(1, 1, 1)), 0.0);
  EXPECT_DOUBLE_EQ(mhat(2.0, unit_spec(1, 1, 1)), 4.0);
  const ProblemSpec s = unit_spec(1.3, 0.7, 1.6);
  for (double x : {0.3, 1.0, 4.0}) {
    const double h = 1e-5;
    EXPECT_NEAR((mhat(x + h, s) - mhat(x - h, s)) / (2 * h), kirchhoff(x, s), 1e-8 * kirchhoff(x, s));
  }
}

TEST(Integrals, ZeroConstantAndBound) {
  Fixture fx;
  const FractalFunction zero = FractalFunction::zeros(fx.g, true);
  EXPECT_EQ(f_integral(zero, fx.spec, fx.g), 0.0);
  EXPECT_EQ(g_integral(zero, fx.spec, fx.g), 0.0);
  const FractalFunction c(3, std::vector<double>(fx.g.vertex_count(), -2.0), false);
  EXPECT_NEAR(f_integral(c, fx.spec, fx.g), std::pow(2.0, 1.5), 1e-13);
  EXPECT_NEAR(g_integral(c, fx.spec, fx.g), std::pow(2.0, 5.0), 1e-12);

  ProblemSpec s = fx.spec;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double& f : s.f_values) f = u01(rng) < 0.3 ? 0.8 : 0.0;
  const FractalFunction u = fx.random_direction(3);
  EXPECT_LE(f_integral(u, s, fx.g), 0.8 * std::pow(u.sup_norm(), s.q));
}

TEST(EulerFunctional, ZeroIsZero) {
  Fixture fx;
  EXPECT_EQ(euler_functional(FractalFunction::zeros(fx.g, true), fx.spec, fx.g, fx.em), 0.0);
}

TEST(EulerFunctional, NehariIdentitiesOnMembers) {
  Fixture fx;
  int members = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FractalFunction w = fx.random_direction(seed);
    for (const FiberingRoot& r : find_roots(profile(w, fx.spec, fx.g, fx.em)).roots) {
      const FunctionalTerms t = functional_terms(w.scaled(r.t), fx.spec, fx.g, fx.em);
      const double I = euler_functional(t, fx.spec);
      EXPECT_NEAR(euler_on_nehari_without_g(t, fx.spec), I, 1e-10 * std::abs(I));
      EXPECT_NEAR(euler_on_nehari_without_f(t, fx.spec), I, 1e-10 * std::abs(I));
      const double scale = classify(t, fx.spec).scale;
      EXPECT_LE(std::abs(nehari_residual(t, fx.spec)), 1e-9 * scale);
      EXPECT_NEAR(phi2_f_form(t, fx.spec), phi2_g_form(t, fx.spec), 1e-9 * scale);
      ++members;
    }
  }
  EXPECT_GT(members, 0);
}

TEST(NehariResidual, NonpositiveTermsGivePositiveResidual) {
  Fixture fx;
  ProblemSpec s = fx.spec;
  std::fill(s.f_values.begin(), s.f_values.end(), -1.0);
  std::fill(s.g_values.begin(), s.g_values.end(), -0.5);
  const FractalFunction u = fx.random_direction(8);
  const double E = renormalized_energy(u, fx.g, fx.em).renormalized;
  EXPECT_GE(nehari_residual(u, s, fx.g, fx.em), s.b * E);
}

TEST(NehariResidual, SignFollowsFiberingDerivative) {
  Fixture fx;
  const FractalFunction u = fx.random_direction(9);
  const FiberingProfile prof = profile(u, fx.spec, fx.g, fx.em);
  for (double c : {1e-4, 1e-3, 0.01, 0.1, 1.0, 3.0, 10.0}) {
    const double res = nehari_residual(u.scaled(c), fx.spec, fx.g, fx.em);
    const double dphi = phi_prime(c, prof) * c;
    if (std::abs(dphi) > 1e-12 * phi_prime_scale(c, prof)) {
      EXPECT_EQ(res > 0, dphi > 0) << "c = " << c;
    }
  }
}

TEST(Classify, CaseIVRootsArePlusThenMinus) {
  Fixture fx;
  const FractalFunction w = fx.random_direction(12);
  const FiberingRoots roots = find_roots(profile(w, fx.spec, fx.g, fx.em));
  ASSERT_EQ(roots.case_tag, FiberingCase::IV);
  ASSERT_EQ(roots.roots.size(), 2u);
  EXPECT_EQ(classify(w.scaled(roots.roots[0].t), fx.spec, fx.g, fx.em).tag, NehariTag::Plus);
  EXPECT_EQ(classify(w.scaled(roots.roots[1].t), fx.spec, fx.g, fx.em).tag, NehariTag::Minus);
  EXPECT_EQ(classify(w, fx.spec, fx.g, fx.em).tag, NehariTag::NotMember);
  EXPECT_THROW((void)classify(FractalFunction::zeros(fx.g, true), fx.spec, fx.g, fx.em), DegenerateInputError);
}

TEST(Classify, ToleranceIsScaleFree) {
  Fixture fx;
  const FractalFunction w = fx.random_direction(13);
  const double t = find_roots(profile(w, fx.spec, fx.g, fx.em)).roots.front().t;
  const FunctionalTerms terms = functional_terms(w.scaled(t), fx.spec, fx.g, fx.em);
  // A tiny plus-branch member keeps its tag: the tolerance scales with its terms.
  EXPECT_LT(terms.energy, 1e-3);
  const NehariClass c = classify(terms, fx.spec);
  EXPECT_EQ(c.tag, NehariTag::Plus);
  EXPECT_GT(std::abs(c.phi2), 0.1 * c.scale);
}

TEST(Thresholds, ReferenceValues) {
  ProblemSpec s;
  s.lambda = 0.01;
  const Thresholds t = thresholds(s, 1.0, 1.0, 1.0);
  EXPECT_NEAR(t.lambda2, validation::oracle::kLambda2, 1e-14);
  EXPECT_NEAR(t.lambda3, validation::oracle::kLambda3, 1e-14);
  EXPECT_NEAR(t.lambda_hat1, validation::oracle::kLambdaHat1, 1e-14);
  EXPECT_NEAR(t.lambda2, std::pow(5.0 / 7.0, 2.5) / 3.5, 1e-15);
  EXPECT_NEAR(t.lambda3, std::pow(1.0 / 7.0, 1.0 / 6.0) * 6.0 / 7.0, 1e-15);
}

TEST(Thresholds, HatNeverExceedsLambdaOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    ProblemSpec s;
    s.a = 0.1 + 3 * u(rng);
    s.b = 0.1 + 3 * u(rng);
    s.k = 0.1 + 2 * u(rng);
    s.p = 1.2 + 2 * u(rng);
    s.q = 1.0 + (s.p - 1.0) * (0.05 + 0.9 * u(rng));
    s.l = s.p * (s.k + 1.0) * (1.01 + u(rng));
    s.lambda = 0.1;
    const Thresholds t = thresholds(s, 0.2 + u(rng), 0.5 + u(rng), 0.5 + u(rng));
    EXPECT_LE(t.lambda_hat1, t.lambda1 * (1 + 1e-15));
  }
}

TEST(Thresholds, RejectDegenerateInputs) {
  ProblemSpec s;
  s.lambda = 0.1;
  EXPECT_THROW((void)thresholds(s, 0.0, 1.0, 1.0), PreconditionError);
  EXPECT_THROW((void)thresholds(s, 1.0, 0.0, 1.0), PreconditionError);
}

TEST(ProblemSpec, ValidatesExponentOrdering) {
  ProblemSpec s;
  s.lambda = 0.1;
  EXPECT_NO_THROW(s.validate_constants());
  s.q = 2.5;
  EXPECT_THROW(s.validate_constants(), InvariantError);
  s.q = 1.5;
  s.l = 3.9;
  try {
    s.validate_constants();
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("p(k+1) < l"), std::string::npos);
  }
  s.l = 5.0;
  s.lambda = 0.0;
  EXPECT_THROW(s.validate_constants(), InvariantError);
}

TEST(ProblemSpec, SampleCountsMustMatch) {
  Fixture fx;
  ProblemSpec s = fx.spec;
  s.f_values.pop_back();
  EXPECT_THROW(s.validate(fx.g), DimensionError);
}

TEST(Coercivity, SmallScalesVanishAndNegativeFIsMonotone) {
  Fixture fx;
  const FractalFunction u = fx.random_direction(6);
  const std::vector<double> small = {1e-8};
  EXPECT_NEAR(coercivity_probe(fx.spec, fx.g, fx.em, u, small)[0].second, 0.0, 1e-10);

  ProblemSpec s = fx.spec;
  std::fill(s.f_values.begin(), s.f_values.end(), -1.0);
  std::fill(s.g_values.begin(), s.g_values.end(), -1.0);
  std::vector<double> grid;
  for (int i = 0; i < 60; ++i) grid.push_back(std::pow(10.0, -3 + 0.1 * i));
  const auto rows = coercivity_probe(s, fx.g, fx.em, u, grid);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].second, rows[i - 1].second);
  EXPECT_THROW((void)coercivity_probe(s, fx.g, fx.em, FractalFunction::zeros(fx.g, true), grid), DegenerateInputError);
}

}  // namespace
}  // namespace gplap
