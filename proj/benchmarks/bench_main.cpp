#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gasket_plap/energy.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/functional.hpp"
#include "gasket_plap/solver.hpp"

namespace {

using namespace gplap;

std::vector<double> random_dirichlet(const GasketLevel& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(g.vertex_count());
  for (double& x : v) x = n(rng);
  for (VertexId b : GasketLevel::boundary()) v[b] = 0.0;
  return v;
}

ProblemSpec canonical_spec(const GasketLevel& g, double lambda) {
  ProblemSpec s;
  s.level = g.level();
  s.lambda = lambda;
  s.f_values.assign(g.vertex_count(), 1.0);
  s.g_values.assign(g.vertex_count(), 1.0);
  return s;
}

void BM_BuildLevel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_level(m));
  state.SetComplexityN(static_cast<std::int64_t>(GasketLevel::cell_count_for(m)));
}
BENCHMARK(BM_BuildLevel)->DenseRange(4, 10, 2)->Complexity(benchmark::oN);

void BM_EnergyGradient(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GasketLevel g = build_level(m);
  const EnergyModel em = EnergyModel::make(3.0, 0.3, m);
  const auto u = random_dirichlet(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(u, g, em));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edges().size()));
}
BENCHMARK(BM_EnergyGradient)->DenseRange(4, 8, 2);

void BM_ExtendPharmonic(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 10.0;
  const GasketLevel coarse = build_level(m);
  const GasketLevel fine = build_level(m + 1);
  const FractalFunction u = FractalFunction::dirichlet_from(coarse, random_dirichlet(coarse, 2));
  for (auto _ : state) benchmark::DoNotOptimize(extend_pharmonic(u, coarse, fine, p));
}
BENCHMARK(BM_ExtendPharmonic)->Args({5, 20})->Args({5, 30})->Args({5, 15});

void BM_MinimalBoundaryEnergy(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GasketLevel g = build_level(m);
  for (auto _ : state) benchmark::DoNotOptimize(minimal_boundary_energy(g, 3.0));
}
BENCHMARK(BM_MinimalBoundaryEnergy)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

void BM_FindRoots(benchmark::State& state) {
  FiberingProfile f;
  f.A = f.B = f.F = f.G = 1.0;
  f.lambda = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(f));
}
BENCHMARK(BM_FindRoots);

void BM_EmbeddingConstant(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GasketLevel g = build_level(m);
  const EnergyModel em = EnergyModel::make(2.0, 0.6, m);
  for (auto _ : state) benchmark::DoNotOptimize(embedding_constant(g, em));
}
BENCHMARK(BM_EmbeddingConstant)->DenseRange(3, 5, 1)->Unit(benchmark::kMillisecond);

void BM_TwoSolutions(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GasketLevel g = build_level(m);
  const EnergyModel em = EnergyModel::make(2.0, 0.6, m);
  const NehariSolver solver(g, em);
  ProblemSpec spec = canonical_spec(g, 1.0);
  spec.lambda = 0.5 * solver.thresholds(spec).lambda_hat1;
  SolveOptions opts;
  opts.restarts = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solver.two_solutions(spec, opts));
}
BENCHMARK(BM_TwoSolutions)->Args({4, 2})->Args({5, 2})->Args({5, 8})->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
