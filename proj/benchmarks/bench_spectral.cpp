#include <benchmark/benchmark.h>

#include "anspde/fft.hpp"
#include "anspde/field_ops.hpp"
#include "anspde/nonlinear.hpp"

using namespace anspde;

namespace {

VectorField make_field(int n, std::uint64_t stream) {
  return random_divfree_field(Grid::make_cubic(n), 4.0, 1.0, 99, stream);
}

void TransformRoundTrip(benchmark::State& state) {
  const VectorField f = make_field(int(state.range(0)), 0);
  for (auto _ : state) {
    auto rt = fft::to_spectral(fft::to_physical(f));
    benchmark::DoNotOptimize(rt.comp[0].data());
  }
}
BENCHMARK(TransformRoundTrip)->Arg(16)->Arg(32)->Arg(64);

void LerayProjection(benchmark::State& state) {
  const VectorField f = make_field(int(state.range(0)), 1);
  for (auto _ : state) {
    auto p = leray_project(f);
    benchmark::DoNotOptimize(p.comp[0].data());
  }
}
BENCHMARK(LerayProjection)->Arg(16)->Arg(32)->Arg(64);

void AnisoNorm(benchmark::State& state) {
  const VectorField f = make_field(int(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(aniso_norm(f, {1.0, 1.0}));
}
BENCHMARK(AnisoNorm)->Arg(16)->Arg(32)->Arg(64);

void ConvectiveTerm(benchmark::State& state) {
  const VectorField u = make_field(int(state.range(0)), 3);
  const VectorField v = make_field(int(state.range(0)), 4);
  for (auto _ : state) {
    auto b = convective(u, v);
    benchmark::DoNotOptimize(b.comp[0].data());
  }
}
BENCHMARK(ConvectiveTerm)->Arg(16)->Arg(32)->Arg(64);

void DampingTerm(benchmark::State& state) {
  const VectorField u = make_field(int(state.range(0)), 5);
  for (auto _ : state) {
    auto d = damping(u, 0.5, 1.5);
    benchmark::DoNotOptimize(d.comp[0].data());
  }
}
BENCHMARK(DampingTerm)->Arg(16)->Arg(32)->Arg(64);

}  // namespace
