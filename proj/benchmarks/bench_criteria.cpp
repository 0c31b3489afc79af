// Benchmarks for the criteria layer: regression-recipe correlators, the
// two non-Markovianity measures, and the rate-integrated completion.

#include <benchmark/benchmark.h>

#include "qregress/criteria.hpp"
#include "qregress/models.hpp"
#include "qregress/qalg.hpp"

namespace {

using namespace qregress;

constexpr double kPi = 3.14159265358979323846;

void BM_TwoPointRecipe(benchmark::State& state) {
  const ModelMap map = model_map_decay(LorentzianBath{1.0, 1.1, 0.2, 20.0});
  const std::vector<Operator2> ops{op_sigma_minus(), op_sigma_plus()};
  const std::vector<double> times{0.3, 1.0};
  const Operator2 rho0 = op_proj1();
  for (auto _ : state)
    benchmark::DoNotOptimize(qrt_npcf(map, ops, times, rho0));
}
BENCHMARK(BM_TwoPointRecipe);

void BM_FourPointRecipe(benchmark::State& state) {
  const ModelMap map = model_map_constant_dephasing(0.4);
  const std::vector<Operator2> ops{op_sigma_x(), op_sigma_plus(),
                                   op_sigma_minus(), op_sigma_z()};
  const std::vector<double> times{0.2, 0.5, 1.1, 1.7};
  const Operator2 rho0 = op_bloch_state(0.5 * kPi, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(qrt_npcf(map, ops, times, rho0));
}
BENCHMARK(BM_FourPointRecipe);

void BM_ExactDephasingCorrelator(benchmark::State& state) {
  const OhmicBath bath{1.0, 1.0, 10.0};
  const Operator2 rho0 = op_bloch_state(0.5 * kPi, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_tpcf_dephasing(
        bath, op_sigma_minus(), op_sigma_plus(), 1.0, 2.5, rho0));
}
BENCHMARK(BM_ExactDephasingCorrelator)->Unit(benchmark::kMillisecond);

void BM_BackflowMeasure(benchmark::State& state) {
  const ModelMap map =
      model_map_engineered(EngineeredDistribution{0.0, 1.0, 0.5, 0.1, 1.0});
  const Operator2 plus = op_bloch_state(0.5 * kPi, 0.0);
  const Operator2 minus = op_bloch_state(0.5 * kPi, kPi);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        blp_measure(map, plus, minus, 10.0, 0.01).value);
}
BENCHMARK(BM_BackflowMeasure)->Unit(benchmark::kMillisecond);

void BM_DivisibilityMeasure(benchmark::State& state) {
  const ModelMap map = model_map_decay(LorentzianBath{1.0, 1.1, 0.2, 20.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(rhp_divisibility(map, 2.0, 0.05).value);
}
BENCHMARK(BM_DivisibilityMeasure)->Unit(benchmark::kMillisecond);

void BM_DivisibleCompletion(benchmark::State& state) {
  const ModelMap map = model_map_decay(LorentzianBath{1.0, 1.1, 0.2, 20.0});
  for (auto _ : state) {
    const MapFactors f = divisible_completion(map, 0.3, 1.4);
    benchmark::DoNotOptimize(f.scale[3]);
  }
}
BENCHMARK(BM_DivisibleCompletion)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
