#include <benchmark/benchmark.h>

#include "anspde/solver.hpp"

using namespace anspde;

namespace {

void FullStep(benchmark::State& state) {
  const int n = int(state.range(0));
  const GridPtr g = Grid::make_cubic(n);
  NoiseModel noise;
  noise.basis = NoiseBasis::make_fourier(g, 8, 1.0, 2.0);
  noise.coef.sigma0.kind = AdditiveSpec::Kind::basis;
  noise.coef.sigma0.amplitude = 0.05;
  SolverConfig cfg;
  cfg.grid = g;
  cfg.galerkin_cutoff = 6;
  cfg.noise_cutoff = 8;
  cfg.dt = 1e-2;
  cfg.T = 1.0;
  cfg.epsilon = 1.0;
  VectorField u = project_to_galerkin(
      random_divfree_field(g, 4.0, 0.5, 1, 0), cfg);
  int i = 0;
  for (auto _ : state) {
    u = step(u, i * cfg.dt, i, 0, cfg, noise);
    benchmark::DoNotOptimize(u.comp[0].data());
    ++i;
  }
}
BENCHMARK(FullStep)->Arg(16)->Arg(24)->Arg(32);

void LedgeredStep(benchmark::State& state) {
  const int n = int(state.range(0));
  const GridPtr g = Grid::make_cubic(n);
  NoiseModel noise;
  noise.basis = NoiseBasis::make_fourier(g, 8, 1.0, 2.0);
  noise.coef.sigma0.kind = AdditiveSpec::Kind::basis;
  noise.coef.sigma0.amplitude = 0.05;
  SolverConfig cfg;
  cfg.grid = g;
  cfg.galerkin_cutoff = 6;
  cfg.noise_cutoff = 8;
  cfg.dt = 1e-2;
  cfg.T = 1.0;
  cfg.epsilon = 1.0;
  cfg.record_ledger = true;
  VectorField u = project_to_galerkin(
      random_divfree_field(g, 4.0, 0.5, 1, 0), cfg);
  int i = 0;
  LedgerRow row;
  for (auto _ : state) {
    u = step(u, i * cfg.dt, i, 0, cfg, noise, nullptr, &row);
    benchmark::DoNotOptimize(row.residual);
    ++i;
  }
}
BENCHMARK(LedgeredStep)->Arg(16)->Arg(24)->Arg(32);

}  // namespace
