#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "evcrp/encoding.hpp"

namespace evcrp {

// Analytic model of amplitude-amplified sampling: a search space of
// `space_size` basis states contains `num_solutions` marked ones, and a run
// with i Grover iterations hits a marked state with probability
// sin^2((2i+1) asin(sqrt(K/N))).
struct SamplingProblem {
  BigInt space_size;
  BigInt num_solutions;
};

double success_probability(const SamplingProblem& problem, std::uint64_t iterations);

// floor((pi/4) sqrt(N/K)), the textbook iteration count when K is known.
std::uint64_t optimal_iterations(const SamplingProblem& problem);

enum class StrategyKind {
  Constant,        // floor(sqrt(N)) every run
  SweepDecreasing, // floor(sqrt(N)), ..., 1, cyclically
  SweepIncreasing, // 1, ..., floor(sqrt(N)), cyclically
  BoyerRandom,     // uniform in [0, ceil(m)-1]; m grows by 6/5 per failure
};

std::string strategy_kind_name(StrategyKind kind);

struct Strategy {
  StrategyKind kind = StrategyKind::SweepDecreasing;
  std::uint64_t sweep_high = 0;           // sweeps: 0 means floor(sqrt(N))
  std::uint64_t sweep_low = 1;
  std::uint64_t constant_iterations = 0;  // Constant: 0 means floor(sqrt(N))
  double boyer_growth = 1.2;

  static Strategy for_problem(StrategyKind kind, const SamplingProblem& problem);
};

// Produces the iteration count for each run. Boyer's schedule reacts to
// outcomes (m resets to 1 on success, since each new solution changes K);
// the others ignore them.
class IterationScheduler {
 public:
  IterationScheduler(const Strategy& strategy, const SamplingProblem& problem);

  std::uint64_t next(std::mt19937_64& rng);
  void record_outcome(bool success);

 private:
  Strategy strategy_;
  std::uint64_t cursor_ = 0;  // sweep position
  double boyer_m_ = 1.0;
  double boyer_cap_ = 1.0;
};

struct RunRecord {
  std::uint64_t run = 0;                  // 1-based
  std::uint64_t iterations = 0;
  bool success = false;
  std::int64_t found_index = -1;          // target id in 0..K-1, -1 on failure
  std::uint64_t cumulative_found = 0;
  std::uint64_t cumulative_iterations = 0;
};

enum class StopReason { AllFound, StopAfter, MaxRuns };

struct SamplingTrace {
  std::vector<RunRecord> runs;
  StopReason stop_reason = StopReason::MaxRuns;
  std::uint64_t found = 0;
  std::uint64_t total_runs = 0;
  std::uint64_t total_iterations = 0;
};

struct SamplingOptions {
  std::uint64_t max_runs = 100000;
  std::uint64_t stop_after = 0;  // stop at this many distinct finds; 0: all
  std::uint64_t seed = 0;
  bool keep_runs = true;         // false keeps aggregates only
};

// Simulates repeated runs: each run draws an iteration count from the
// scheduler and succeeds with the analytic probability for the targets
// still missing; a success yields a uniformly random not-yet-found target.
// Targets are abstract ids 0..K-1; mapping them to basis states is the
// caller's business.
SamplingTrace simulate_sampling(const SamplingProblem& problem,
                                const Strategy& strategy,
                                const SamplingOptions& options);

// Uniform classical guessing over the same space: each run draws one basis
// index and succeeds iff it is a not-yet-found target (iterations = 1).
SamplingTrace classical_baseline(const SamplingProblem& problem,
                                 const SamplingOptions& options);

struct CurvePoint {
  std::uint64_t run = 0;
  double median_found = 0.0;
  double mean_found = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct StrategyCurve {
  StrategyKind kind{};
  std::vector<CurvePoint> points;            // per-run aggregate over seeds
  std::vector<std::uint64_t> runs_to_collect_all;  // per seed; max_runs if censored
  std::uint64_t censored = 0;                // seeds that never collected all
};

struct BenchmarkOptions {
  std::uint64_t seeds = 50;
  std::uint64_t seed_base = 1;  // seed values seed_base..seed_base+seeds-1
  std::uint64_t max_runs = 100000;
  std::uint64_t stop_after = 0;
  int threads = 0;
};

// Runs every strategy for `seeds` seeds and aggregates cumulative_found per
// run (quantiles use linear interpolation between order statistics). Traces
// shorter than the longest one are padded with their final value.
std::vector<StrategyCurve> strategy_benchmark(const SamplingProblem& problem,
                                              const std::vector<StrategyKind>& kinds,
                                              const BenchmarkOptions& options);

// Deterministic helpers on top of mt19937_64 (the distributions in <random>
// are not pinned down by the standard; these are).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
double uniform_unit(std::mt19937_64& rng);  // [0,1) with 53 random bits
BigInt uniform_below_big(std::mt19937_64& rng, const BigInt& bound);

std::uint64_t floor_sqrt(const BigInt& value);

}  // namespace evcrp
