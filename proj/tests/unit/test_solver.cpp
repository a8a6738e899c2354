#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gasket_plap/errors.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/solver.hpp"

namespace gplap {
namespace {

struct Canonical {
  GasketLevel g = build_level(4);
  EnergyModel em = EnergyModel::make(2.0, 0.6, 4);
  NehariSolver solver{g, em};
  ProblemSpec spec;
  Thresholds thr;

  Canonical() {
    spec.level = 4;
    spec.lambda = 1.0;
    spec.f_values.assign(g.vertex_count(), 1.0);
    spec.g_values.assign(g.vertex_count(), 1.0);
    thr = solver.thresholds(spec);
    spec.lambda = 0.5 * thr.lambda_hat1;
    thr = solver.thresholds(spec);
  }

  FractalFunction random_direction(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> v(g.vertex_count());
    for (double& x : v) x = n(rng);
    return FractalFunction::dirichlet_from(g, v);
  }
};

const Canonical& canonical() {
  static const Canonical c;
  return c;
}

TEST(EulerGradient, MatchesCentralDifferences) {
  const Canonical& c = canonical();
  const FractalFunction u = c.random_direction(1).scaled(0.01);
  const FractalFunction v = c.random_direction(2);
  const auto grad = euler_gradient(u.values(), c.spec, c.g, c.em);
  double dot = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) dot += grad[i] * v[i];
  const double h = 1e-7;
  const double fd = (euler_functional(FractalFunction::dirichlet_from(c.g, [&] {
                                        std::vector<double> w(u.values().begin(), u.values().end());
                                        for (std::size_t i = 0; i < w.size(); ++i) w[i] += h * v[i];
                                        return w;
                                      }()),
                                      c.spec, c.g, c.em) -
                     euler_functional(FractalFunction::dirichlet_from(c.g, [&] {
                                        std::vector<double> w(u.values().begin(), u.values().end());
                                        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= h * v[i];
                                        return w;
                                      }()),
                                      c.spec, c.g, c.em)) /
                    (2 * h);
  EXPECT_NEAR(dot, fd, 1e-5 * std::abs(fd));
  for (VertexId b : GasketLevel::boundary()) EXPECT_EQ(grad[b], 0.0);
}

TEST(WeakResidual, ZeroIsTrivial) {
  const Canonical& c = canonical();
  const WeakResidual r = weak_residual(FractalFunction::zeros(c.g, true), c.spec, c.g, c.em);
  EXPECT_TRUE(r.trivial);
  EXPECT_EQ(r.inf_norm, 0.0);
  const FractalFunction free(4, std::vector<double>(c.g.vertex_count(), 1.0), false);
  EXPECT_THROW((void)weak_residual(free, c.spec, c.g, c.em), PreconditionError);
}

TEST(WeakResidual, ContinuousUnderSmallPerturbation) {
  const Canonical& c = canonical();
  const FractalFunction u = c.random_direction(5).scaled(0.05);
  const FractalFunction w = c.random_direction(6);
  const double base = weak_residual(u, c.spec, c.g, c.em).inf_norm;
  std::vector<double> v(u.values().begin(), u.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += 1e-8 * u.sup_norm() * w[i] / w.sup_norm();
  const double moved = weak_residual(FractalFunction::dirichlet_from(c.g, v), c.spec, c.g, c.em).inf_norm;
  EXPECT_LT(std::abs(moved - base), 1e-6 * base);
}

TEST(MinimizeOnPlus, NegativeEnergyMemberAndStationary) {
  const Canonical& c = canonical();
  const auto [u, I] = minimize_on_plus(c.spec, c.g, c.em, SolveOptions{});
  EXPECT_LT(I, 0.0);
  EXPECT_EQ(classify(u, c.spec, c.g, c.em).tag, NehariTag::Plus);
  EXPECT_NEAR(phi_prime(1.0, profile(u, c.spec, c.g, c.em)), 0.0,
              1e-9 * phi_prime_scale(1.0, profile(u, c.spec, c.g, c.em)));
  const WeakResidual r = weak_residual(u, c.spec, c.g, c.em);
  EXPECT_LE(r.inf_norm, 1e-6 * std::max(1.0, r.energy_grad_inf));
}

TEST(MinimizeOnMinus, CertifiedAboveDelta1) {
  const Canonical& c = canonical();
  const auto [v, I] = minimize_on_minus(c.spec, c.g, c.em, SolveOptions{});
  const NehariClass cls = classify(v, c.spec, c.g, c.em);
  EXPECT_EQ(cls.tag, NehariTag::Minus);
  EXPECT_LT(cls.phi2, 0.0);
  EXPECT_GE(I, c.thr.delta1 - 1e-8);
  EXPECT_GE(renormalized_energy(v, c.g, c.em).norm, c.thr.minus_norm_floor * (1 - 1e-12));
  const WeakResidual r = weak_residual(v, c.spec, c.g, c.em);
  EXPECT_LE(r.inf_norm, 1e-6 * std::max(1.0, r.energy_grad_inf));
}

TEST(Minimize, ReportsMinimumOverRestarts) {
  const Canonical& c = canonical();
  SolveOptions o;
  o.restarts = 4;
  const BranchResult r = c.solver.minimize(Branch::Plus, c.spec, o);
  ASSERT_FALSE(r.restarts.empty());
  for (const RestartOutcome& ro : r.restarts) {
    if (ro.admissible && ro.converged) EXPECT_GE(ro.value, r.I - 1e-12 * std::abs(r.I));
  }
  EXPECT_GE(r.best_restart, 0);
}

TEST(Minimize, ThresholdGuardsNameTheThreshold) {
  const Canonical& c = canonical();
  const ProblemSpec above = c.spec.with_lambda(1.01 * c.thr.lambda_hat1);
  try {
    (void)c.solver.two_solutions(above, SolveOptions{});
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_hat_1"), std::string::npos);
  }
  try {
    (void)c.solver.minimize(Branch::Plus, c.spec.with_lambda(1.01 * c.thr.lambda1), SolveOptions{});
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_1"), std::string::npos);
  }
}

TEST(Minimize, NoAdmissibleDirectionIsInfeasible) {
  const Canonical& c = canonical();
  ProblemSpec s = c.spec;
  std::fill(s.f_values.begin(), s.f_values.end(), -1.0);
  std::fill(s.g_values.begin(), s.g_values.end(), -1.0);
  SolveOptions o;
  o.restarts = 2;
  EXPECT_THROW((void)c.solver.minimize(Branch::Plus, s, o), InfeasibleError);
  const SolutionReport partial = c.solver.two_solutions(s, o);
  EXPECT_FALSE(partial.plus_ok);
  EXPECT_FALSE(partial.minus_ok);
  EXPECT_FALSE(partial.failure.empty());
}

TEST(Solver, RejectsLevelZeroAndBadOptions) {
  const GasketLevel g0 = build_level(0);
  EXPECT_THROW(NehariSolver(g0, EnergyModel::make(2.0, 0.6, 0)), PreconditionError);
  SolveOptions o;
  o.restarts = 0;
  EXPECT_THROW(o.check(), InvariantError);
}

TEST(TwoSolutions, DistinctAndDeterministic) {
  const Canonical& c = canonical();
  SolveOptions o;
  o.restarts = 3;
  const SolutionReport a = c.solver.two_solutions(c.spec, o);
  const SolutionReport b = c.solver.two_solutions(c.spec, o);
  ASSERT_TRUE(a.plus_ok);
  ASSERT_TRUE(a.minus_ok);
  EXPECT_LT(a.I_plus, 0.0);
  EXPECT_GT(a.I_minus, 0.0);
  EXPECT_TRUE(a.delta1_certified);
  EXPECT_TRUE(a.failure.empty());
  EXPECT_EQ(a.I_plus, b.I_plus);
  EXPECT_EQ(a.I_minus, b.I_minus);
  EXPECT_EQ(a.u_plus, b.u_plus);
  EXPECT_EQ(a.u_minus, b.u_minus);
}

TEST(TwoSolutions, WarmStartFromCoarserLevel) {
  const Canonical& c = canonical();
  SolveOptions o;
  o.restarts = 2;
  o.warm_start_levels = true;
  const SolutionReport r = c.solver.two_solutions(c.spec, o);
  EXPECT_TRUE(r.plus_ok);
  EXPECT_TRUE(r.minus_ok);
}

TEST(Continuity, ZeroPerturbationAndSignSymmetry) {
  const Canonical& c = canonical();
  SolveOptions o;
  o.restarts = 2;
  const SolutionReport sol = c.solver.two_solutions(c.spec, o);
  const FractalFunction w = c.random_direction(40).scaled(sol.u_plus.sup_norm());
  const double zero[] = {0.0};
  EXPECT_NEAR(perturbation_continuity_check(sol.u_plus, w, zero, c.spec, c.g, c.em)[0].t_bar, 1.0, 1e-14);
  const std::vector<double> eps = {1e-2, 1e-4, 1e-6, -1e-2, -1e-4, -1e-6};
  for (Branch br : {Branch::Plus, Branch::Minus}) {
    const FractalFunction& u0 = br == Branch::Plus ? sol.u_plus : sol.u_minus;
    const auto rows = perturbation_continuity_check(u0, w.scaled(u0.sup_norm() / w.sup_norm()), eps, c.spec, c.g,
                                                    c.em, br);
    ASSERT_EQ(rows.size(), eps.size());
    for (const ContinuityRow& row : rows) {
      ASSERT_TRUE(row.available);
      EXPECT_LT(std::abs(row.t_bar - 1.0), 10.0 * std::abs(row.eps));
    }
    EXPECT_LT(std::abs(rows[2].t_bar - 1.0), std::abs(rows[0].t_bar - 1.0));
    EXPECT_LT(std::abs(rows[5].t_bar - 1.0), std::abs(rows[3].t_bar - 1.0));
  }
}

TEST(GradientTermScale, PositiveOffZeroAndHomogeneousTerms) {
  const Canonical& c = canonical();
  const FractalFunction u = c.random_direction(8).scaled(0.01);
  const double s = gradient_term_scale(u.values(), c.spec, c.g, c.em);
  EXPECT_GT(s, 0.0);
  const auto grad = euler_gradient(u.values(), c.spec, c.g, c.em);
  double inf = 0.0;
  for (double x : grad) inf = std::max(inf, std::abs(x));
  EXPECT_LE(inf, s * (1 + 1e-12));
}

}  // namespace
}  // namespace gplap
