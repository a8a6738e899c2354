#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gasket_plap/errors.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/validation.hpp"

namespace gplap {
namespace {

FiberingProfile make(double A, double B, double F, double G, double lambda) {
  FiberingProfile f;
  f.A = A;
  f.B = B;
  f.F = F;
  f.G = G;
  f.lambda = lambda;
  return f;  // p = 2, q = 1.5, l = 5, k = 1
}

TEST(Profile, UnitNormGivesUnitEnergyTerms) {
  const GasketLevel g = build_level(3);
  const EnergyModel em = EnergyModel::make(2.0, 0.6, 3);
  ProblemSpec s;
  s.level = 3;
  s.lambda = 0.1;
  s.f_values.assign(g.vertex_count(), 1.0);
  s.g_values.assign(g.vertex_count(), 1.0);
  std::vector<double> v(g.vertex_count(), 0.0);
  v[5] = 1.0;
  FractalFunction u = FractalFunction::dirichlet_from(g, v);
  u = u.scaled(1.0 / renormalized_energy(u, g, em).norm);
  const FiberingProfile f = profile(u, s, g, em);
  EXPECT_NEAR(f.A, 1.0, 1e-13);
  EXPECT_NEAR(f.B, 1.0, 1e-13);
  EXPECT_GT(f.F, 0.0);
  EXPECT_GT(f.G, 0.0);

  const double c = 2.3;
  const FiberingProfile fc = profile(u.scaled(c), s, g, em);
  const FiberingProfile expected = f.scaled(c);
  EXPECT_NEAR(fc.A, std::pow(c, 4.0) * f.A, 1e-12 * fc.A);
  EXPECT_NEAR(fc.B, c * c * f.B, 1e-12 * fc.B);
  EXPECT_NEAR(fc.F, std::pow(c, 1.5) * f.F, 1e-12 * fc.F);
  EXPECT_NEAR(fc.G, std::pow(c, 5.0) * f.G, 1e-12 * fc.G);
  EXPECT_NEAR(expected.G, fc.G, 1e-12 * fc.G);
  EXPECT_THROW((void)profile(FractalFunction::zeros(g, true), s, g, em), DegenerateInputError);
}

TEST(Phi, DerivativesAtOne) {
  const FiberingProfile f = make(1, 1, 1, 1, 1);
  EXPECT_NEAR(phi_prime(1.0, f), 0.0, 1e-15);
  EXPECT_NEAR(phi_double_prime(1.0, f), -0.5, 1e-15);
  EXPECT_THROW((void)phi(0.0, f), PreconditionError);
}

TEST(Phi, DerivativesMatchFiniteDifferences) {
  const FiberingProfile f = make(0.7, 1.3, 0.4, 0.2, 0.9);
  for (double t : {0.2, 0.9, 1.7}) {
    const double h = 1e-5 * t;
    EXPECT_NEAR(phi_prime(t, f), (phi(t + h, f) - phi(t - h, f)) / (2 * h), 1e-7 * phi_prime_scale(t, f));
    EXPECT_NEAR(phi_double_prime(t, f), (phi_prime(t + h, f) - phi_prime(t - h, f)) / (2 * h),
                1e-6 * phi_prime_scale(t, f) / t);
  }
}

TEST(Phi, Reparametrization) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 50; ++i) {
    const FiberingProfile f = make(u(rng), u(rng), u(rng) - 1.0, u(rng) - 1.0, u(rng));
    const double c = u(rng);
    const FiberingProfile fc = f.scaled(c);
    for (double t : {0.3, 1.0, 2.5}) EXPECT_NEAR(phi(t, fc), phi(c * t, f), 1e-12 * (1 + std::abs(phi(c * t, f))));
  }
}

TEST(Cases, SignPatterns) {
  EXPECT_EQ(classify_case(make(1, 1, -1, -1, 1)), FiberingCase::I);
  EXPECT_EQ(classify_case(make(1, 1, 1, -1, 1)), FiberingCase::II);
  EXPECT_EQ(classify_case(make(1, 1, -1, 1, 1)), FiberingCase::III);
  EXPECT_EQ(classify_case(make(1, 1, 1, 1, 1)), FiberingCase::IV);
}

TEST(Roots, CaseIHasNone) { EXPECT_TRUE(find_roots(make(1, 1, -1, -1, 1)).roots.empty()); }

TEST(Roots, CaseIVTwoRootsAgreeWithGridOracle) {
  const FiberingProfile f = make(1, 1, 1, 1, 0.1);
  const FiberingRoots r = find_roots(f);
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_EQ(r.roots[0].kind, RootKind::LocalMin);
  EXPECT_EQ(r.roots[1].kind, RootKind::LocalMax);
  const auto grid = validation::oracle::dense_grid_roots(f, 1e-6, 1e3, 10000);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_NEAR(r.roots[0].t, grid[0].t, 1e-10 * grid[0].t);
  EXPECT_NEAR(r.roots[1].t, grid[1].t, 1e-10 * grid[1].t);
  EXPECT_GT(phi_double_prime(r.roots[0].t, f), 0.0);
  EXPECT_LT(phi_double_prime(r.roots[1].t, f), 0.0);
}

TEST(Roots, CaseIIOneMinimum) {
  const FiberingRoots r = find_roots(make(1, 1, 1, -1, 1));
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].kind, RootKind::LocalMin);
}

TEST(Roots, CaseIIIOneMaximum) {
  const FiberingRoots r = find_roots(make(1, 1, -1, 1, 1));
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].kind, RootKind::LocalMax);
}

TEST(Roots, LargeLambdaRemovesThePair) {
  const FiberingRoots r = find_roots(make(1, 1, 1, 1, 100.0));
  EXPECT_EQ(r.regime, RootRegime::NoRootPair);
  EXPECT_TRUE(r.roots.empty());
  EXPECT_THROW((void)plus_scale(make(1, 1, 1, 1, 100.0)), ProjectionUnavailable);
  EXPECT_THROW((void)minus_scale(make(1, 1, -1, -1, 1.0)), ProjectionUnavailable);
}

TEST(Roots, DoubleRootIsReportedAsDegenerateContact) {
  // lambda_c F = max_t (A t^{2.5} + B t^{0.5} - G t^{3.5}) makes the two roots merge.
  auto h = [](double t) { return std::pow(t, 2.5) + std::pow(t, 0.5) - std::pow(t, 3.5); };
  double lo = 0.01, hi = 2.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 300; ++i) {
    const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    (h(a) > h(b) ? hi : lo) = h(a) > h(b) ? b : a;
  }
  const FiberingRoots r = find_roots(make(1, 1, 1, 1, h(0.5 * (lo + hi))));
  EXPECT_EQ(r.regime, RootRegime::DegenerateContact);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].kind, RootKind::Inflection);
}

TEST(Roots, RejectsInvalidProfiles) {
  EXPECT_THROW((void)find_roots(make(0, 0, 1, 1, 1)), PreconditionError);
  EXPECT_THROW((void)find_roots(make(-1, 1, 1, 1, 1)), PreconditionError);
}

TEST(Roots, RandomProfilesMatchOracleAcrossScales) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> e(-6.0, 6.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const double A = std::pow(10.0, e(rng));
    const double B = std::pow(10.0, e(rng));
    const double F = std::pow(10.0, e(rng));
    const double G = std::pow(10.0, e(rng));
    const FiberingProfile f = make(A, B, F, G, 1.0);
    const FiberingRoots r = find_roots(f);
    const auto grid = validation::oracle::dense_grid_roots(f, 1e-30, 1e30, 60000);
    if (r.regime == RootRegime::DegenerateContact) continue;
    ASSERT_EQ(r.roots.size(), grid.size()) << "profile " << i;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      EXPECT_NEAR(r.roots[k].t, grid[k].t, 1e-9 * grid[k].t);
      EXPECT_EQ(r.roots[k].kind == RootKind::LocalMin, grid[k].local_min);
    }
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Projection, PlusIsScaleInvariantAndMinusIsMinus) {
  const GasketLevel g = build_level(3);
  const EnergyModel em = EnergyModel::make(2.0, 0.6, 3);
  ProblemSpec s;
  s.level = 3;
  s.lambda = 0.02;
  s.f_values.assign(g.vertex_count(), 1.0);
  s.g_values.assign(g.vertex_count(), 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(g.vertex_count());
  for (double& x : v) x = n(rng);
  const FractalFunction u = FractalFunction::dirichlet_from(g, v);

  const FractalFunction up = project_plus(u, s, g, em);
  const FractalFunction up3 = project_plus(u.scaled(3.0), s, g, em);
  for (std::size_t i = 0; i < up.size(); ++i) EXPECT_NEAR(up3[i], up[i], 1e-10 * up.sup_norm());
  EXPECT_EQ(classify(up, s, g, em).tag, NehariTag::Plus);

  const FractalFunction um = project_minus(u, s, g, em);
  EXPECT_EQ(classify(um, s, g, em).tag, NehariTag::Minus);
  EXPECT_GT(um.sup_norm(), up.sup_norm());
}

TEST(FiberingCsv, HeaderAndRows) {
  std::ostringstream os;
  const std::vector<double> t = {0.5, 1.0, 2.0};
  write_fibering_csv(make(1, 1, 1, 1, 1), t, os);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("t,phi,dphi,ddphi\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

}  // namespace
}  // namespace gplap
