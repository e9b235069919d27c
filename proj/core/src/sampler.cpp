#include "evcrp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "evcrp/parallel.hpp"

namespace evcrp {

namespace {

constexpr std::uint64_t kMaxMaterializedTargets = std::uint64_t{1} << 24;

void require_problem(const SamplingProblem& problem) {
  if (problem.space_size < 1)
    throw std::invalid_argument("space_size must be positive");
  if (problem.num_solutions < 0 || problem.num_solutions > problem.space_size)
    throw std::invalid_argument("num_solutions must lie in [0, space_size]");
}

double big_ratio(const BigInt& num, const BigInt& den) {
  return num.convert_to<double>() / den.convert_to<double>();
}

std::uint64_t target_count(const SamplingProblem& problem) {
  if (problem.num_solutions > kMaxMaterializedTargets)
    throw std::invalid_argument("num_solutions too large to track individually");
  return problem.num_solutions.convert_to<std::uint64_t>();
}

void finish(SamplingTrace& trace, const SamplingOptions& options, std::uint64_t k) {
  if (trace.found == k && k > 0)
    trace.stop_reason = StopReason::AllFound;
  else if (options.stop_after > 0 && trace.found >= options.stop_after)
    trace.stop_reason = StopReason::StopAfter;
  else
    trace.stop_reason = StopReason::MaxRuns;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace

double success_probability(const SamplingProblem& problem, std::uint64_t iterations) {
  require_problem(problem);
  if (problem.num_solutions == 0) return 0.0;
  if (problem.num_solutions == problem.space_size) return 1.0;
  const double ratio = big_ratio(problem.num_solutions, problem.space_size);
  const double theta = std::asin(std::sqrt(ratio));
  const double amplitude =
      std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return std::clamp(amplitude * amplitude, 0.0, 1.0);
}

std::uint64_t optimal_iterations(const SamplingProblem& problem) {
  require_problem(problem);
  if (problem.num_solutions == 0)
    throw std::invalid_argument("no solutions to amplify");
  const double ratio = big_ratio(problem.space_size, problem.num_solutions);
  return static_cast<std::uint64_t>(std::floor(std::numbers::pi / 4.0 *
                                               std::sqrt(ratio)));
}

std::string strategy_kind_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Constant: return "constant";
    case StrategyKind::SweepDecreasing: return "decreasing";
    case StrategyKind::SweepIncreasing: return "increasing";
    case StrategyKind::BoyerRandom: return "boyer";
  }
  return "?";
}

Strategy Strategy::for_problem(StrategyKind kind, const SamplingProblem& problem) {
  require_problem(problem);
  Strategy strategy;
  strategy.kind = kind;
  const std::uint64_t root = std::max<std::uint64_t>(1, floor_sqrt(problem.space_size));
  strategy.sweep_high = root;
  strategy.sweep_low = 1;
  strategy.constant_iterations = root;
  return strategy;
}

IterationScheduler::IterationScheduler(const Strategy& strategy,
                                       const SamplingProblem& problem)
    : strategy_(strategy) {
  require_problem(problem);
  const std::uint64_t root = std::max<std::uint64_t>(1, floor_sqrt(problem.space_size));
  if (strategy_.sweep_high == 0) strategy_.sweep_high = root;
  if (strategy_.constant_iterations == 0) strategy_.constant_iterations = root;
  if (strategy_.sweep_low < 1 || strategy_.sweep_low > strategy_.sweep_high)
    throw std::invalid_argument("sweep bounds must satisfy 1 <= low <= high");
  if (strategy_.boyer_growth <= 1.0)
    throw std::invalid_argument("boyer growth must exceed 1");
  boyer_cap_ = static_cast<double>(root);
}

std::uint64_t IterationScheduler::next(std::mt19937_64& rng) {
  const std::uint64_t span = strategy_.sweep_high - strategy_.sweep_low + 1;
  switch (strategy_.kind) {
    case StrategyKind::Constant:
      return strategy_.constant_iterations;
    case StrategyKind::SweepDecreasing:
      return strategy_.sweep_high - cursor_++ % span;
    case StrategyKind::SweepIncreasing:
      return strategy_.sweep_low + cursor_++ % span;
    case StrategyKind::BoyerRandom:
      return uniform_below(rng,
                           static_cast<std::uint64_t>(std::ceil(boyer_m_)));
  }
  return strategy_.constant_iterations;
}

void IterationScheduler::record_outcome(bool success) {
  if (strategy_.kind != StrategyKind::BoyerRandom) return;
  if (success)
    boyer_m_ = 1.0;
  else
    boyer_m_ = std::min(boyer_m_ * strategy_.boyer_growth, boyer_cap_);
}

SamplingTrace simulate_sampling(const SamplingProblem& problem,
                                const Strategy& strategy,
                                const SamplingOptions& options) {
  require_problem(problem);
  if (options.max_runs == 0) throw std::invalid_argument("max_runs must be positive");
  const std::uint64_t k = target_count(problem);

  std::vector<std::uint64_t> remaining(k);
  std::iota(remaining.begin(), remaining.end(), 0);

  IterationScheduler scheduler(strategy, problem);
  std::mt19937_64 rng(options.seed);
  SamplingTrace trace;

  const std::uint64_t goal =
      options.stop_after > 0 ? std::min(options.stop_after, k) : k;
  for (std::uint64_t run = 1; run <= options.max_runs && trace.found < goal; ++run) {
    RunRecord record;
    record.run = run;
    record.iterations = scheduler.next(rng);
    const double p = success_probability({problem.space_size, BigInt(remaining.size())},
                                         record.iterations);
    record.success = uniform_unit(rng) < p;
    if (record.success) {
      const std::uint64_t pick = uniform_below(
          rng, static_cast<std::uint64_t>(remaining.size()));
      record.found_index = static_cast<std::int64_t>(remaining[pick]);
      remaining[pick] = remaining.back();
      remaining.pop_back();
      ++trace.found;
    }
    scheduler.record_outcome(record.success);
    record.cumulative_found = trace.found;
    trace.total_iterations += record.iterations;
    record.cumulative_iterations = trace.total_iterations;
    trace.total_runs = run;
    if (options.keep_runs) trace.runs.push_back(record);
  }
  finish(trace, options, k);
  return trace;
}

SamplingTrace classical_baseline(const SamplingProblem& problem,
                                 const SamplingOptions& options) {
  require_problem(problem);
  if (options.max_runs == 0) throw std::invalid_argument("max_runs must be positive");
  const std::uint64_t k = target_count(problem);

  std::vector<bool> found_ids(k, false);
  std::mt19937_64 rng(options.seed);
  SamplingTrace trace;

  const std::uint64_t goal =
      options.stop_after > 0 ? std::min(options.stop_after, k) : k;
  for (std::uint64_t run = 1; run <= options.max_runs && trace.found < goal; ++run) {
    RunRecord record;
    record.run = run;
    record.iterations = 1;
    const BigInt draw = uniform_below_big(rng, problem.space_size);
    if (draw < k) {
      const auto id = draw.convert_to<std::uint64_t>();
      if (!found_ids[id]) {
        found_ids[id] = true;
        record.success = true;
        record.found_index = static_cast<std::int64_t>(id);
        ++trace.found;
      }
    }
    record.cumulative_found = trace.found;
    trace.total_iterations += record.iterations;
    record.cumulative_iterations = trace.total_iterations;
    trace.total_runs = run;
    if (options.keep_runs) trace.runs.push_back(record);
  }
  finish(trace, options, k);
  return trace;
}

std::vector<StrategyCurve> strategy_benchmark(const SamplingProblem& problem,
                                              const std::vector<StrategyKind>& kinds,
                                              const BenchmarkOptions& options) {
  require_problem(problem);
  if (options.seeds == 0) throw std::invalid_argument("seeds must be positive");

  struct BenchTrace {
    std::vector<std::uint32_t> cumulative;  // found after each run
    std::uint64_t total_runs = 0;
    bool complete = false;
  };

  const std::uint64_t seeds = options.seeds;
  std::vector<BenchTrace> traces(kinds.size() * seeds);
  run_jobs(traces.size(), options.threads, [&](std::uint64_t job) {
    const StrategyKind kind = kinds[job / seeds];
    SamplingOptions run_options;
    run_options.max_runs = options.max_runs;
    run_options.stop_after = options.stop_after;
    run_options.seed = options.seed_base + job % seeds;
    const SamplingTrace trace = simulate_sampling(
        problem, Strategy::for_problem(kind, problem), run_options);
    BenchTrace& out = traces[job];
    out.total_runs = trace.total_runs;
    out.complete = trace.stop_reason != StopReason::MaxRuns;
    out.cumulative.reserve(trace.runs.size());
    for (const auto& record : trace.runs)
      out.cumulative.push_back(static_cast<std::uint32_t>(record.cumulative_found));
  });

  std::vector<StrategyCurve> curves;
  curves.reserve(kinds.size());
  for (std::size_t s = 0; s < kinds.size(); ++s) {
    StrategyCurve curve;
    curve.kind = kinds[s];
    const BenchTrace* slice = &traces[s * seeds];

    std::uint64_t longest = 0;
    for (std::uint64_t i = 0; i < seeds; ++i) {
      const BenchTrace& trace = slice[i];
      longest = std::max(longest, trace.total_runs);
      if (trace.complete) {
        curve.runs_to_collect_all.push_back(trace.total_runs);
      } else {
        curve.runs_to_collect_all.push_back(options.max_runs);
        ++curve.censored;
      }
    }

    curve.points.reserve(longest);
    std::vector<double> values(seeds);
    for (std::uint64_t run = 1; run <= longest; ++run) {
      double sum = 0.0;
      for (std::uint64_t i = 0; i < seeds; ++i) {
        const auto& cumulative = slice[i].cumulative;
        values[i] = cumulative.empty()
                        ? 0.0
                        : static_cast<double>(
                              cumulative[std::min<std::size_t>(
                                  static_cast<std::size_t>(run - 1),
                                  cumulative.size() - 1)]);
        sum += values[i];
      }
      std::sort(values.begin(), values.end());
      CurvePoint point;
      point.run = run;
      point.median_found = quantile(values, 0.5);
      point.mean_found = sum / static_cast<double>(seeds);
      point.q25 = quantile(values, 0.25);
      point.q75 = quantile(values, 0.75);
      curve.points.push_back(point);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / bound * bound;
  for (;;) {
    const std::uint64_t draw = rng();
    if (draw < limit) return draw % bound;
  }
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BigInt uniform_below_big(std::mt19937_64& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("bound must be positive");
  if (bound <= std::numeric_limits<std::uint64_t>::max())
    return uniform_below(rng, bound.convert_to<std::uint64_t>());

  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  const unsigned words = (bits + 63) / 64;
  const unsigned top_bits = bits - 64 * (words - 1);
  const std::uint64_t top_mask = top_bits >= 64
                                     ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << top_bits) - 1;
  for (;;) {
    BigInt value = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t chunk = rng();
      if (w == 0) chunk &= top_mask;
      value = (value << 64) | chunk;
    }
    if (value < bound) return value;
  }
}

std::uint64_t floor_sqrt(const BigInt& value) {
  if (value < 0) throw std::invalid_argument("negative value");
  const BigInt root = boost::multiprecision::sqrt(value);
  if (root > std::numeric_limits<std::uint64_t>::max())
    throw std::out_of_range("square root exceeds uint64");
  return root.convert_to<std::uint64_t>();
}

}  // namespace evcrp
