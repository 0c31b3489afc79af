// Benchmarks for the quadrature layer: adaptive Simpson on smooth and
// oscillatory integrands (with and without a period hint) and composite
// Gauss-Legendre panels, plus the physical integrals built on top.

#include <benchmark/benchmark.h>

#include <cmath>

#include "qregress/quadrature.hpp"
#include "qregress/spectral.hpp"

namespace {

using namespace qregress;

void BM_AdaptiveSmooth(benchmark::State& state) {
  const QuadratureSpec spec;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(
        [](double x) { return std::exp(-x * x); }, 0.0, 5.0, spec));
}
BENCHMARK(BM_AdaptiveSmooth);

void BM_AdaptiveOscillatory(benchmark::State& state) {
  const double w = static_cast<double>(state.range(0));
  QuadratureSpec spec;
  spec.oscillation_period_hint = 2.0 * 3.14159265358979323846 / w;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(
        [w](double x) { return std::cos(w * x) * std::exp(-x); }, 0.0, 10.0,
        spec));
}
BENCHMARK(BM_AdaptiveOscillatory)->Arg(5)->Arg(50)->Arg(200);

void BM_GaussPanels(benchmark::State& state) {
  const int panels = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_gauss(
        [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0,
        panels));
}
BENCHMARK(BM_GaussPanels)->Arg(4)->Arg(16)->Arg(64);

void BM_ThermalExponent(benchmark::State& state) {
  const OhmicBath bath{1.0, 1.0, 10.0};
  const double t = 0.1 * static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(dephasing_g(bath, t));
}
BENCHMARK(BM_ThermalExponent)->Arg(5)->Arg(20)->Arg(100);

void BM_ThermalTwoTimeExponent(benchmark::State& state) {
  const OhmicBath bath{1.0, 1.0, 10.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(dephasing_h(bath, 2.5, 1.0));
}
BENCHMARK(BM_ThermalTwoTimeExponent);

void BM_BathCorrelationQuadrature(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(bath_corr_f_quadrature(bath, 1.3));
}
BENCHMARK(BM_BathCorrelationQuadrature);

}  // namespace

BENCHMARK_MAIN();
