#include <benchmark/benchmark.h>

#include <bnlab/constants.hpp>
#include <bnlab/reduced_energy.hpp>
#include <bnlab/shooting.hpp>
#include <bnlab/spectrum.hpp>

#include <array>
#include <cmath>

using namespace bnlab;

namespace {

void BM_QuadratureBubbleTail(benchmark::State& state) {
  const Dimension dim(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bubble_power_integral(dim, dim.exponent() + 1.0));
}
BENCHMARK(BM_QuadratureBubbleTail)->Arg(4)->Arg(5);

void BM_OdeHarmonic(benchmark::State& state) {
  OdeSpec spec;
  spec.rel_tol = 1e-11;
  spec.abs_tol = 1e-13;
  const std::array<double, 2> y0{0.0, 1.0};
  for (auto _ : state) {
    auto sol = solve_ivp([](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = -y[0];
    }, y0, 0.0, 100.0, spec);
    benchmark::DoNotOptimize(sol.final_state()[0]);
  }
}
BENCHMARK(BM_OdeHarmonic);

void BM_Eigenpair(benchmark::State& state) {
  const Dimension dim(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_eigenpair(dim).eigenvalue);
}
BENCHMARK(BM_Eigenpair)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ShotN4(benchmark::State& state) {
  const double lambda = ConstantsCache::shared().get(Dimension(4))->pair.eigenvalue + 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(shoot(Dimension(4), lambda, 1.6e12).boundary_value);
}
BENCHMARK(BM_ShotN4)->Unit(benchmark::kMillisecond);

void BM_ShotN5(benchmark::State& state) {
  const double lambda = ConstantsCache::shared().get(Dimension(5))->pair.eigenvalue - 0.02;
  for (auto _ : state) benchmark::DoNotOptimize(shoot(Dimension(5), lambda, 1e6).boundary_value);
}
BENCHMARK(BM_ShotN5)->Unit(benchmark::kMillisecond);

void BM_AnsatzExcessN4(benchmark::State& state) {
  const auto d = ConstantsCache::shared().get(Dimension(4));
  const auto a = AnsatzParams::n4(0.01, 0.073, 1.0, d->pair.eigenvalue);
  for (auto _ : state) benchmark::DoNotOptimize(ansatz_energy_excess(a, d->pair, d->universal));
}
BENCHMARK(BM_AnsatzExcessN4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
