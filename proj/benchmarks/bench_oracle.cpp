// Benchmarks for the discretized-bath oracle: single-excitation
// propagation cost against mode count, correlator evaluation, and the
// projection decomposition built on top of it.

#include <benchmark/benchmark.h>

#include "qregress/oracle.hpp"
#include "qregress/spectral.hpp"

namespace {

using namespace qregress;

const LorentzianBath kBath{1.0, 1.1, 0.2, 20.0};

void BM_Discretize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const DiscretizedBath db = discretize(kBath, n);
    benchmark::DoNotOptimize(db.modes.back().g);
  }
}
BENCHMARK(BM_Discretize)->RangeMultiplier(4)->Range(32, 512);

void BM_OracleAmplitude(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiscretizedBath db = discretize(kBath, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_decay_amplitude(db, kBath.omega0, 1.0));
}
BENCHMARK(BM_OracleAmplitude)
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->Unit(benchmark::kMillisecond);

void BM_OracleCorrelator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiscretizedBath db = discretize(kBath, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        oracle_tpcf_decay(db, kBath.omega0, 0.3, 1.0));
}
BENCHMARK(BM_OracleCorrelator)
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->Unit(benchmark::kMillisecond);

void BM_ProjectionDecomposition(benchmark::State& state) {
  const DiscretizedBath db = discretize(kBath, 128);
  for (auto _ : state) {
    const PQTerms pq = pq_decomposition(db, kBath.omega0, 0.3, 1.0);
    benchmark::DoNotOptimize(pq.total);
  }
}
BENCHMARK(BM_ProjectionDecomposition)->Unit(benchmark::kMillisecond);

void BM_DephasingModeSum(benchmark::State& state) {
  const OhmicBath bath{1.0, 1.0, 10.0};
  const DiscretizedBath db = discretize_ohmic(bath, 4096);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_dephasing_g(db, bath.beta, 1.0));
}
BENCHMARK(BM_DephasingModeSum);

}  // namespace

BENCHMARK_MAIN();
