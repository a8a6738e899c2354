#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "gasket_plap/energy.hpp"
#include "gasket_plap/errors.hpp"
#include "gasket_plap/rp_cache.hpp"
#include "gasket_plap/validation.hpp"

namespace gplap {
namespace {

std::vector<double> random_values(const GasketLevel& g, std::uint64_t seed, bool dirichlet = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(g.vertex_count());
  for (double& x : v) x = n(rng);
  if (dirichlet) {
    for (VertexId b : GasketLevel::boundary()) v[b] = 0.0;
  }
  return v;
}

TEST(Ap, SpecExamples) {
  EXPECT_DOUBLE_EQ(a_p(0, 0, 1, 2), 2.0);
  EXPECT_DOUBLE_EQ(a_p(1, 2, 3, 3), 10.0);
  for (double c : {-2.0, 0.0, 7.5}) EXPECT_EQ(a_p(c, c, c, 2.7), 0.0);
}

TEST(CrudeEnergy, LevelZeroAndOne) {
  const GasketLevel g0 = build_level(0);
  EXPECT_DOUBLE_EQ(crude_energy(std::vector<double>{0, 0, 1}, g0, 2.0), 2.0);
  const GasketLevel g1 = build_level(1);
  // Boundary (1,0,0) with midpoints (m12, m23, m13) = (2/5, 1/5, 2/5).
  const std::vector<double> u = {1, 0, 0, 0.4, 0.2, 0.4};
  EXPECT_NEAR(crude_energy(u, g1, 2.0), 1.2, 1e-15);
}

TEST(CrudeEnergy, ConstantsHaveNoEnergy) {
  for (int m = 0; m <= 5; ++m) {
    const GasketLevel g = build_level(m);
    EXPECT_EQ(crude_energy(std::vector<double>(g.vertex_count(), 3.25), g, 1.7), 0.0);
  }
}

TEST(RenormalizedEnergy, LevelZeroEqualsCrude) {
  const GasketLevel g = build_level(0);
  const FractalFunction u(0, {0.3, -1.0, 2.0}, false);
  const EnergyReport r = renormalized_energy(u, g, EnergyModel::make(3.0, 0.3, 0));
  EXPECT_DOUBLE_EQ(r.renormalized, r.crude);
  EXPECT_NEAR(r.norm, std::cbrt(r.crude), 1e-15);
}

TEST(RenormalizedEnergy, HarmonicExtensionPreservesEnergyAtP2) {
  const GasketLevel g0 = build_level(0);
  const GasketLevel g1 = build_level(1);
  const FractalFunction u0(0, {1, 0, 0}, false);
  const FractalFunction u1 = extend_pharmonic(u0, g0, g1, 2.0);
  EXPECT_NEAR(renormalized_energy(u1, g1, EnergyModel::make(2.0, 0.6, 1)).renormalized, 2.0, 1e-12);
}

TEST(RenormalizedEnergy, Homogeneity) {
  const GasketLevel g = build_level(4);
  const EnergyModel em = EnergyModel::make(2.5, 0.5, 4);
  const auto u = random_values(g, 3);
  const double base = renormalized_energy(u, g, em);
  for (double c : {-2.0, 0.5, 3.0}) {
    std::vector<double> cu(u);
    for (double& x : cu) x *= c;
    EXPECT_NEAR(renormalized_energy(cu, g, em), std::pow(std::abs(c), 2.5) * base, 1e-12 * base);
  }
}

TEST(RenormalizedEnergy, LevelMismatchThrows) {
  const GasketLevel g = build_level(3);
  EXPECT_THROW((void)renormalized_energy(random_values(g, 1), g, EnergyModel::make(2.0, 0.6, 2)), DimensionError);
}

TEST(EnergyModel, ChecksParameters) {
  EXPECT_THROW((void)EnergyModel::make(1.0, 0.6, 2), InvariantError);
  EXPECT_THROW((void)EnergyModel::make(2.0, 1.0, 2), InvariantError);
  EXPECT_THROW((void)EnergyModel::make(2.0, 0.6, -1), InvariantError);
}

TEST(Extension, OneFifthTwoFifthsRule) {
  const auto m = extend_cell({1.0, 0.0, 0.0}, 2.0);
  EXPECT_NEAR(m[0], 0.4, 1e-12);
  EXPECT_NEAR(m[1], 0.2, 1e-12);
  EXPECT_NEAR(m[2], 0.4, 1e-12);
}

TEST(Extension, AgreesWithLinearOracleAtP2) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double x1 = u(rng), x2 = u(rng), x3 = u(rng);
    const auto got = extend_cell({x1, x2, x3}, 2.0);
    const auto want = validation::oracle::harmonic_midpoints_p2(x1, x2, x3);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-11);
  }
}

TEST(Extension, ConstantStaysConstant) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto m = extend_cell({2.5, 2.5, 2.5}, p);
    for (double x : m) EXPECT_NEAR(x, 2.5, 1e-12);
  }
}

TEST(Extension, PreservesCoarseValuesAndRejectsWrongLevels) {
  const GasketLevel g2 = build_level(2);
  const GasketLevel g3 = build_level(3);
  const FractalFunction u = FractalFunction::dirichlet_from(g2, random_values(g2, 7));
  const FractalFunction v = extend_pharmonic(u, g2, g3, 3.0);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(v[i], u[i]);
  EXPECT_TRUE(v.dirichlet());
  EXPECT_THROW((void)extend_pharmonic(u, g2, build_level(4), 3.0), DimensionError);
}

TEST(Extension, EnergyPreservedAtP2AcrossLevels) {
  const GasketLevel g3 = build_level(3);
  const GasketLevel g4 = build_level(4);
  const FractalFunction u = FractalFunction::dirichlet_from(g3, random_values(g3, 11));
  const FractalFunction v = extend_pharmonic(u, g3, g4, 2.0);
  const double e3 = renormalized_energy(u, g3, EnergyModel::make(2.0, 0.6, 3)).renormalized;
  const double e4 = renormalized_energy(v, g4, EnergyModel::make(2.0, 0.6, 4)).renormalized;
  EXPECT_NEAR(e4, e3, 1e-10 * e3);
}

TEST(EstimateRp, ExactAtP2) {
  EXPECT_NEAR(estimate_rp(2.0, 1e-9), 0.6, 1e-9);
  EXPECT_NEAR(validation::oracle::rp_level1_p2(), 0.6, 1e-15);
}

TEST(EstimateRp, InUnitIntervalForSeveralP) {
  for (double p : {1.5, 2.5, 3.0}) {
    const double r = estimate_rp(p, 1e-6);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(EstimateRp, P3RatioMatchesIndependentSolver) {
  std::vector<double> m6;
  const double rho6 = minimal_boundary_energy(build_level(6), 3.0, &m6);
  const GasketLevel g7 = build_level(7);
  const FractalFunction coarse(6, m6, false);
  const FractalFunction warm = extend_pharmonic(coarse, build_level(6), g7, 3.0);
  const std::vector<double> w(warm.values().begin(), warm.values().end());
  const double rho7 = minimal_boundary_energy(g7, 3.0, nullptr, &w);
  EXPECT_NEAR(rho7 / rho6, validation::oracle::kR3Level7, 1e-10);
}

TEST(EstimateRp, TightToleranceAtP3ReportsNonConvergence) {
  try {
    (void)estimate_rp_detailed(3.0, 1e-12, 5);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved(), 1e-12);
  }
}

TEST(EstimateRp, RejectsBadArguments) {
  EXPECT_THROW((void)estimate_rp(1.0, 1e-6), PreconditionError);
  EXPECT_THROW((void)estimate_rp(2.0, 0.0), PreconditionError);
}

TEST(EnergyGradient, ConstantHasZeroGradient) {
  const GasketLevel g = build_level(3);
  const auto grad = energy_gradient(std::vector<double>(g.vertex_count(), 1.5), g, EnergyModel::make(3.0, 0.3, 3));
  for (double x : grad) EXPECT_EQ(x, 0.0);
}

TEST(EnergyGradient, MatchesCentralDifferences) {
  const GasketLevel g = build_level(4);
  for (double p : {1.5, 2.0, 3.0}) {
    const EnergyModel em = EnergyModel::make(p, 0.5, 4);
    const auto u = random_values(g, 21, false);
    const auto v = random_values(g, 22, false);
    const auto grad = energy_gradient(u, g, em);
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += grad[i] * v[i];
    const double h = 1e-6;
    std::vector<double> up(u), um(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      up[i] += h * v[i];
      um[i] -= h * v[i];
    }
    const double fd = (renormalized_energy(up, g, em) - renormalized_energy(um, g, em)) / (2 * h);
    EXPECT_NEAR(dot, fd, 1e-6 * std::abs(fd)) << "p = " << p;
  }
}

TEST(EnergyGradient, Homogeneity) {
  const GasketLevel g = build_level(3);
  const double p = 2.6;
  const EnergyModel em = EnergyModel::make(p, 0.45, 3);
  const auto u = random_values(g, 4);
  const auto gu = energy_gradient(u, g, em);
  const double c = 1.7;
  std::vector<double> cu(u);
  for (double& x : cu) x *= c;
  const auto gcu = energy_gradient(cu, g, em);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(gcu[i], std::pow(c, p - 1) * gu[i], 1e-11 * (1 + std::abs(gcu[i])));
}

TEST(EnergyForm, DiagonalLinearityAndConstants) {
  const GasketLevel g = build_level(4);
  const EnergyModel em = EnergyModel::make(2.4, 0.5, 4);
  const FractalFunction u = FractalFunction::dirichlet_from(g, random_values(g, 31));
  const FractalFunction v = FractalFunction::dirichlet_from(g, random_values(g, 32));
  const double e = renormalized_energy(u, g, em).renormalized;
  EXPECT_NEAR(energy_form(u, u, g, em), e, 1e-10 * e);
  EXPECT_NEAR(energy_form(u, v.scaled(-2.5), g, em), -2.5 * energy_form(u, v, g, em),
              1e-12 * std::abs(energy_form(u, v, g, em)) + 1e-14);
  const FractalFunction one(4, std::vector<double>(g.vertex_count(), 1.0), false);
  EXPECT_NEAR(energy_form(u, one, g, em), 0.0, 1e-12);
}

TEST(Embedding, LevelOneClosedForm) {
  const GasketLevel g = build_level(1);
  const double K1 = embedding_constant(g, EnergyModel::make(2.0, 0.6, 1));
  EXPECT_NEAR(K1, 3.0 / std::sqrt(50.0), 1e-10);
  EXPECT_NEAR(K1, validation::oracle::k1_p2(), 1e-8);
}

TEST(Embedding, NondecreasingInLevelAndSharp) {
  double prev = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const GasketLevel g = build_level(m);
    const EnergyModel em = EnergyModel::make(2.0, 0.6, m);
    const EmbeddingResult r = embedding_extremal(g, em);
    EXPECT_GE(r.K, prev - 1e-12);
    prev = r.K;
    const double ratio = r.extremal.sup_norm() / renormalized_energy(r.extremal, g, em).norm;
    EXPECT_NEAR(ratio, r.K, 1e-8);
  }
  EXPECT_THROW((void)embedding_constant(build_level(0), EnergyModel::make(2.0, 0.6, 0)), PreconditionError);
}

class CacheFile : public ::testing::Test {
 protected:
  std::filesystem::path path_ = std::filesystem::temp_directory_path() / "gplap_unit_rp_cache.json";
  void SetUp() override { std::filesystem::remove(path_); }
  void TearDown() override { std::filesystem::remove(path_); }
};

TEST_F(CacheFile, StoresAndReloads) {
  {
    RpCache c(path_);
    const auto e = c.get_or_estimate(2.0, 1e-9);
    EXPECT_NEAR(e.r_p, 0.6, 1e-9);
  }
  ASSERT_TRUE(std::filesystem::exists(path_));
  RpCache again(path_);
  const auto hit = again.lookup(2.0, 1e-9);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->r_p, 0.6, 1e-9);
  EXPECT_FALSE(again.lookup(2.0, 1e-12).has_value());
  EXPECT_FALSE(again.lookup(2.5, 1e-3).has_value());
}

TEST_F(CacheFile, EnvironmentVariableWins) {
  const char* old = std::getenv("GASKET_PLAP_CACHE");
  const std::string saved = old != nullptr ? old : "";
  ::setenv("GASKET_PLAP_CACHE", path_.c_str(), 1);
  EXPECT_EQ(RpCache::resolve_path("fallback.json"), path_);
  ::unsetenv("GASKET_PLAP_CACHE");
  EXPECT_EQ(RpCache::resolve_path("fallback.json"), std::filesystem::path("fallback.json"));
  if (old != nullptr) ::setenv("GASKET_PLAP_CACHE", saved.c_str(), 1);
}

TEST_F(CacheFile, MalformedFileIsAnIoError) {
  std::ofstream(path_) << "{not json";
  EXPECT_THROW(RpCache{path_}, IoError);
}

}  // namespace
}  // namespace gplap
