#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "evosort/harness.hpp"
#include "evosort/metrics.hpp"
#include "evosort/reference.hpp"

namespace {

using namespace evosort;

ExperimentConfig trial_config() {
  ExperimentConfig c;
  c.n = 2000;
  c.ks = {50};
  c.horizon = min_horizon(c.n) + 50'000;
  c.trials = 8;
  c.master_seed = 3;
  return c;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto c = trial_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, Execution::Serial));
}
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TrialsParallel(benchmark::State& state) {
  const auto c = trial_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, Execution::Parallel));
}
BENCHMARK(BM_TrialsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

std::pair<Permutation, std::vector<ElementId>> kt_input(std::size_t k) {
  Rng rng(11);
  const std::size_t n = 4 * k;
  auto truth = Permutation::uniform(n, rng);
  std::vector<ElementId> pred(n);
  std::iota(pred.begin(), pred.end(), ElementId{0});
  pred.resize(k);
  return {std::move(truth), std::move(pred)};
}

void BM_KendallMerge(benchmark::State& state) {
  const auto [truth, pred] = kt_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_restricted(pred, truth));
}
BENCHMARK(BM_KendallMerge)->RangeMultiplier(4)->Range(64, 4096);

void BM_KendallPairs(benchmark::State& state) {
  const auto [truth, pred] = kt_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::kendall_tau_pairs(pred, truth));
}
BENCHMARK(BM_KendallPairs)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
