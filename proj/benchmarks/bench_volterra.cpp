// Benchmarks for the decay-amplitude solver: grid solve cost against node
// count (the kernel convolution is quadratic in the node count) and the
// closed-form evaluations it is validated against.

#include <benchmark/benchmark.h>

#include "qregress/models.hpp"

namespace {

using namespace qregress;

void BM_AmplitudeSolve(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  const double dt = 5.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const DecayAmplitude amp = solve_G_volterra(bath, 5.0, dt);
    benchmark::DoNotOptimize(amp.g.back());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AmplitudeSolve)
    ->RangeMultiplier(2)
    ->Range(512, 4096)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNSquared);

void BM_AmplitudeSolveOrder2(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  const double dt = 5.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const DecayAmplitude amp = solve_G_volterra(bath, 5.0, dt, 2);
    benchmark::DoNotOptimize(amp.g.back());
  }
}
BENCHMARK(BM_AmplitudeSolveOrder2)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ClosedAmplitude(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_G_lorentzian(bath, t));
    t += 1e-6;
  }
}
BENCHMARK(BM_ClosedAmplitude);

void BM_ClosedRates(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  for (auto _ : state) {
    const DecayRates r = decay_rates_closed(bath, 0.7);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ClosedRates);

void BM_OffGridInterpolation(benchmark::State& state) {
  const LorentzianBath bath{1.0, 1.1, 0.2, 20.0};
  const DecayAmplitude amp = solve_G_volterra(bath, 5.0, 5e-3);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(amp.value(t));
    t += 1e-4;
    if (t > 4.9) t = 0.1;
  }
}
BENCHMARK(BM_OffGridInterpolation);

}  // namespace

BENCHMARK_MAIN();
