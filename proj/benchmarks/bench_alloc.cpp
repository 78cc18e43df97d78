#include <benchmark/benchmark.h>

#include "enrel/alloc.hpp"

using namespace enrel;

namespace {

const auto kExp = EnergyFailureModel::exponential(0.5, 1.0);
const auto kSexp = EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5);

void BM_MinEnergyBalanced(benchmark::State& state) {
  const auto tree = gen_balanced(2, static_cast<std::size_t>(state.range(0)), GateKind::and_());
  for (auto _ : state) benchmark::DoNotOptimize(min_energy_alloc(tree, kExp, 0.1));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(tree.size()));
}
BENCHMARK(BM_MinEnergyBalanced)->DenseRange(2, 14, 2)->Complexity(benchmark::oN);

// Stretched exponential has no exact start, so every solve runs Newton.
void BM_MinEnergyBalancedNewton(benchmark::State& state) {
  const auto tree = gen_balanced(2, static_cast<std::size_t>(state.range(0)), GateKind::and_());
  for (auto _ : state) benchmark::DoNotOptimize(min_energy_alloc(tree, kSexp, 0.1));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(tree.size()));
}
BENCHMARK(BM_MinEnergyBalancedNewton)->DenseRange(2, 14, 2)->Complexity(benchmark::oN);

void BM_MinEnergyLine(benchmark::State& state) {
  const auto tree = gen_line(static_cast<std::size_t>(state.range(0)), GateKind::and_());
  for (auto _ : state) benchmark::DoNotOptimize(min_energy_alloc(tree, kSexp, 0.1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinEnergyLine)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oN);

void BM_MaxReliability(benchmark::State& state) {
  const auto tree = gen_balanced(2, static_cast<std::size_t>(state.range(0)), GateKind::and_());
  const double budget = 2.0 * eth(tree, kExp);
  for (auto _ : state) benchmark::DoNotOptimize(max_reliability_alloc(tree, kExp, budget));
}
BENCHMARK(BM_MaxReliability)->DenseRange(1, 9, 2);

void BM_Oracle(benchmark::State& state) {
  const auto tree = gen_balanced(2, 2, GateKind::and_());
  for (auto _ : state) benchmark::DoNotOptimize(oracle_min_energy(tree, kExp, 0.1));
}
BENCHMARK(BM_Oracle);

}  // namespace
