#include <benchmark/benchmark.h>

#include <vector>

#include "enrel/evaluate.hpp"

using namespace enrel;

namespace {

void BM_EvalExact(benchmark::State& state) {
  const auto tree = gen_balanced(2, static_cast<std::size_t>(state.range(0)), GateKind::xor_());
  const std::vector<double> eps(tree.size(), 0.01);
  const Pattern mask = (Pattern{1} << tree.n_inputs()) - 1;
  Pattern x = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval_exact(tree, eps, x++ & mask));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(tree.size()));
}
BENCHMARK(BM_EvalExact)->DenseRange(1, 4)->Complexity(benchmark::oN);

void BM_EvalExactLine(benchmark::State& state) {
  const auto tree = gen_line(static_cast<std::size_t>(state.range(0)), GateKind::or_());
  const std::vector<double> eps(tree.size(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(eval_exact(tree, eps, 0x5555));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalExactLine)->RangeMultiplier(2)->Range(16, 62)->Complexity(benchmark::oN);

void BM_EvalBruteforce(benchmark::State& state) {
  const auto tree = gen_line(static_cast<std::size_t>(state.range(0)), GateKind::and_());
  const std::vector<double> eps(tree.size(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(eval_bruteforce(tree, eps, 5));
}
BENCHMARK(BM_EvalBruteforce)->DenseRange(4, 16, 4);

void BM_EvalReport(benchmark::State& state) {
  const auto tree = gen_balanced(2, static_cast<std::size_t>(state.range(0)), GateKind::and_());
  const std::vector<double> eps(tree.size(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(eval_report(tree, eps));
}
BENCHMARK(BM_EvalReport)->DenseRange(1, 3);

void BM_InfoAudit(benchmark::State& state) {
  const auto tree = gen_balanced(2, 3, GateKind::or_());
  const std::vector<double> eps(tree.size(), 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(info_audit(tree, eps, 0));
}
BENCHMARK(BM_InfoAudit);

}  // namespace
