#include <benchmark/benchmark.h>

#include <random>

#include "evcrp/encoding.hpp"
#include "evcrp/hamiltonian.hpp"
#include "evcrp/model.hpp"
#include "evcrp/sampler.hpp"
#include "evcrp/search.hpp"

namespace {

using namespace evcrp;

void BM_enumerate_pools(benchmark::State& state) {
  const Instance inst = toy_instance();
  for (auto _ : state) {
    auto pools = enumerate_all_pools(inst);
    benchmark::DoNotOptimize(pools);
  }
}
BENCHMARK(BM_enumerate_pools)->Unit(benchmark::kMicrosecond);

void BM_brute_force(benchmark::State& state) {
  const Instance inst = toy_instance();
  const auto pools = enumerate_all_pools(inst);
  for (auto _ : state) {
    GlobalStats stats;
    auto result = brute_force(inst, pools, {}, &stats);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * 10032);
}
BENCHMARK(BM_brute_force)->Unit(benchmark::kMicrosecond);

void BM_greedy_tree(benchmark::State& state) {
  const Instance inst = toy_instance();
  const auto pools = enumerate_all_pools(inst);
  for (auto _ : state) {
    auto result = greedy_tree(inst, pools);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_greedy_tree)->Unit(benchmark::kMicrosecond);

// Full 259,200,000-state spectrum scan; Arg is the thread count (0: all).
void BM_spectrum_scan(benchmark::State& state) {
  const Instance inst = toy_instance();
  const auto weights =
      PenaltyWeights::uniform(Rational(100), PenaltyVariant::Indicator);
  ScanOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto ground = ground_state_exhaustive(inst, 1, weights, options);
    benchmark::DoNotOptimize(ground);
  }
  state.SetItemsProcessed(state.iterations() * 259200000);
}
BENCHMARK(BM_spectrum_scan)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

// Per-run simulator overhead: one iteration keeps the success probability
// near zero, so every trace burns the whole run budget.
void BM_sampling_runs(benchmark::State& state) {
  const SamplingProblem problem{BigInt(259200000), BigInt(1)};
  Strategy strategy = Strategy::for_problem(StrategyKind::Constant, problem);
  strategy.constant_iterations = 1;
  SamplingOptions options;
  options.max_runs = static_cast<std::uint64_t>(state.range(0));
  options.keep_runs = false;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    options.seed = seed++;
    auto trace = simulate_sampling(problem, strategy, options);
    benchmark::DoNotOptimize(trace);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sampling_runs)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_decode_encode(benchmark::State& state) {
  const Instance inst = toy_instance();
  const QuditLayout layout = QuditLayout::for_vehicle(inst);
  std::mt19937_64 rng(7);
  for (auto _ : state) {
    const BigInt index = uniform_below_big(rng, layout.total_dimension());
    benchmark::DoNotOptimize(layout.encode(layout.decode(index)));
  }
}
BENCHMARK(BM_decode_encode);

void BM_check_partial(benchmark::State& state) {
  const Instance inst = toy_instance();
  const QuditLayout layout = QuditLayout::for_vehicle(inst);
  std::mt19937_64 rng(11);
  for (auto _ : state) {
    const auto v = layout.decode(uniform_below_big(rng, layout.total_dimension()));
    benchmark::DoNotOptimize(check_partial(inst, 1, v));
  }
}
BENCHMARK(BM_check_partial);

}  // namespace

BENCHMARK_MAIN();
