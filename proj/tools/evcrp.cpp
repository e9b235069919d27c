#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evcrp/encoding.hpp"
#include "evcrp/errors.hpp"
#include "evcrp/hamiltonian.hpp"
#include "evcrp/io.hpp"
#include "evcrp/model.hpp"
#include "evcrp/sampler.hpp"
#include "evcrp/search.hpp"

namespace {

using namespace evcrp;

constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kSchemaFailure = 2;
constexpr int kInfeasible = 3;
constexpr int kBudgetFailure = 4;

struct Common {
  std::string instance_path;
  bool toy = false;
  std::string output_path;
  int threads = 0;
};

// -i/--instance and --toy land in an option group so CLI11 enforces that
// exactly one instance source is given.
void add_instance_source(CLI::App* cmd, Common& common) {
  auto* source = cmd->add_option_group("instance");
  source->add_option("-i,--instance", common.instance_path, "Instance JSON file");
  source->add_flag("--toy", common.toy, "Use the built-in toy instance");
  source->require_option(1);
}

void add_output(CLI::App* cmd, Common& common, const std::string& what) {
  cmd->add_option("-o,--output", common.output_path, "Write " + what + " here");
}

void add_threads(CLI::App* cmd, Common& common) {
  cmd->add_option("--threads", common.threads, "Worker threads (0: all cores)");
}

Instance resolve_instance(const Common& common) {
  return common.toy ? toy_instance() : load_instance(common.instance_path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Routes a writer to the output file, or to stdout when no path was given.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  emit(path, [&](std::ostream& out) { out << text; });
}

EnumerationOptions scan_options(const Common& common, std::uint64_t budget) {
  EnumerationOptions options;
  options.threads = common.threads;
  if (budget > 0) options.scan_budget = budget;
  return options;
}

std::vector<PartialPool> load_or_enumerate(const Instance& inst,
                                           const std::string& pools_path,
                                           const Common& common,
                                           std::uint64_t budget) {
  if (!pools_path.empty()) return pools_from_json(read_file(pools_path), inst);
  return enumerate_all_pools(inst, scan_options(common, budget));
}

const PartialPool& find_pool(const std::vector<PartialPool>& pools, int vehicle) {
  for (const auto& pool : pools)
    if (pool.vehicle == vehicle) return pool;
  throw std::invalid_argument("no pool for vehicle " + std::to_string(vehicle));
}

StrategyKind parse_strategy(const std::string& name) {
  if (name == "constant") return StrategyKind::Constant;
  if (name == "decreasing") return StrategyKind::SweepDecreasing;
  if (name == "increasing") return StrategyKind::SweepIncreasing;
  if (name == "boyer") return StrategyKind::BoyerRandom;
  throw std::invalid_argument("unknown strategy: " + name);
}

int cmd_validate(const Common& common) {
  const Instance inst = resolve_instance(common);
  const ValidationReport report = validate_instance(inst);
  if (!report.valid) {
    std::cerr << "invalid instance:\n";
    for (const auto& problem : report.problems) std::cerr << "  " << problem << "\n";
    return kSchemaFailure;
  }
  std::cout << "valid: " << inst.num_vehicles << " vehicles, " << inst.num_nodes
            << " nodes, " << inst.num_steps << " steps\n";
  return kOk;
}

struct EnumerateArgs {
  int vehicle = 0;  // 0: all vehicles
  std::uint64_t budget = 0;
};

int cmd_enumerate(const Common& common, const EnumerateArgs& args) {
  const Instance inst = resolve_instance(common);
  std::vector<PartialPool> pools;
  if (args.vehicle > 0)
    pools.push_back(enumerate_feasible(inst, args.vehicle, scan_options(common, args.budget)));
  else
    pools = enumerate_all_pools(inst, scan_options(common, args.budget));

  bool any_empty = false;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (i > 0) std::cout << ' ';
    std::cout << pools[i].entries.size();
    any_empty = any_empty || pools[i].entries.empty();
  }
  std::cout << "\n";
  if (!common.output_path.empty()) write_text(common.output_path, pools_to_json(pools));
  return any_empty ? kInfeasible : kOk;
}

struct SampleArgs {
  int vehicle = 0;
  std::uint64_t synthetic_k = 0;
  std::string pools_path;
  std::string strategy = "decreasing";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t seeds = 50;
  std::uint64_t max_runs = 100000;
  std::uint64_t stop_after = 0;
  std::uint64_t iterations = 0;
  bool benchmark = false;
};

int cmd_sample(const Common& common, const SampleArgs& args) {
  const Instance inst = resolve_instance(common);
  const BigInt space = QuditLayout::for_vehicle(inst).total_dimension();

  BigInt targets;
  if (args.synthetic_k > 0) {
    targets = args.synthetic_k;
  } else {
    const auto pools = args.pools_path.empty()
                           ? std::vector<PartialPool>{enumerate_feasible(
                                 inst, args.vehicle, scan_options(common, 0))}
                           : pools_from_json(read_file(args.pools_path), inst);
    targets = find_pool(pools, args.vehicle).entries.size();
  }
  if (targets == 0) {
    std::cerr << "vehicle " << args.vehicle << " has no feasible partial solutions\n";
    return kInfeasible;
  }
  const SamplingProblem problem{space, targets};

  if (args.benchmark) {
    BenchmarkOptions options;
    options.seeds = args.seeds;
    options.seed_base = args.seed_given ? args.seed : 1;
    options.max_runs = args.max_runs;
    options.stop_after = args.stop_after;
    options.threads = common.threads;
    const std::vector<StrategyKind> kinds = {
        StrategyKind::Constant, StrategyKind::SweepDecreasing,
        StrategyKind::SweepIncreasing, StrategyKind::BoyerRandom};
    const auto curves = strategy_benchmark(problem, kinds, options);
    emit(common.output_path, [&](std::ostream& out) { write_benchmark_csv(out, curves); });
    return kOk;
  }

  SamplingOptions options;
  options.seed = args.seed;
  options.max_runs = args.max_runs;
  options.stop_after = args.stop_after;
  SamplingTrace trace;
  if (args.strategy == "classical") {
    trace = classical_baseline(problem, options);
  } else {
    Strategy strategy = Strategy::for_problem(parse_strategy(args.strategy), problem);
    if (args.iterations > 0) strategy.constant_iterations = args.iterations;
    trace = simulate_sampling(problem, strategy, options);
  }
  emit(common.output_path, [&](std::ostream& out) { write_trace_csv(out, trace); });
  return kOk;
}

struct SolveArgs {
  std::string method = "both";
  std::string pools_path;
  std::string stats_path;
  int max_level = -1;
  bool first_hit = false;
  std::uint64_t budget = 0;
};

int cmd_solve(const Common& common, const SolveArgs& args) {
  const Instance inst = resolve_instance(common);
  const auto pools = load_or_enumerate(inst, args.pools_path, common, args.budget);

  std::optional<SearchResult> brute;
  GlobalStats stats;
  if (args.method != "greedy") {
    BruteForceOptions options;
    if (args.budget > 0) options.product_budget = args.budget;
    brute = brute_force(inst, pools, options, &stats);
    if (brute->found)
      std::cout << "brute: cost=" << format_rational(brute->cost)
                << " feasible=" << stats.feasible_combinations
                << " total=" << stats.total_combinations << "\n";
    else
      std::cout << "brute: infeasible total=" << stats.total_combinations << "\n";
    if (!args.stats_path.empty())
      emit(args.stats_path, [&](std::ostream& out) { write_stats_csv(out, stats); });
  }

  std::optional<SearchResult> greedy;
  if (args.method != "brute") {
    GreedyOptions options;
    options.max_level = args.max_level;
    options.first_hit = args.first_hit;
    greedy = greedy_tree(inst, pools, options);
    if (greedy->found)
      std::cout << "greedy: cost=" << format_rational(greedy->cost)
                << " level=" << greedy->level_reached << "\n";
    else
      std::cout << "greedy: infeasible level_reached=" << greedy->level_reached << "\n";
  }

  if (brute && greedy && brute->found && greedy->found) {
    const Rational epsilon = approximation_ratio(greedy->cost, brute->cost);
    std::cout << "epsilon: " << format_rational(epsilon) << " ("
              << format_double(boost::rational_cast<double>(epsilon)) << ")\n";
  }

  const SearchResult& primary = brute ? *brute : *greedy;
  if (!common.output_path.empty())
    write_text(common.output_path, result_to_json(primary));
  return primary.found ? kOk : kInfeasible;
}

struct HamiltonianArgs {
  int vehicle = 1;
  std::string variant = "indicator";
  std::vector<std::string> lambdas = {"100"};
  std::size_t top = 10;
  std::uint64_t budget = 0;
};

int cmd_hamiltonian(const Common& common, const HamiltonianArgs& args) {
  const Instance inst = resolve_instance(common);
  const PenaltyVariant variant = args.variant == "verbatim"
                                     ? PenaltyVariant::Verbatim
                                     : PenaltyVariant::Indicator;
  if (args.lambdas.size() != 1 && args.lambdas.size() != 5)
    throw std::invalid_argument("--lambda takes 1 or 5 values");
  PenaltyWeights weights =
      PenaltyWeights::uniform(parse_rational(args.lambdas.front()), variant);
  if (args.lambdas.size() == 5) {
    for (std::size_t i = 0; i < args.lambdas.size(); ++i)
      weights.lambda[i] = parse_rational(args.lambdas[i]);
    weights.validate();
  }

  ScanOptions options;
  options.threads = common.threads;
  if (args.budget > 0) options.dimension_budget = args.budget;
  const auto rows = lowest_energy_states(inst, args.vehicle, weights, args.top, options);
  emit(common.output_path, [&](std::ostream& out) { write_energy_csv(out, rows); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-space reduction pipeline for the EV charging and routing problem"};
  app.require_subcommand(1);

  Common validate_common;
  auto* validate = app.add_subcommand("validate", "Check an instance against the schema");
  add_instance_source(validate, validate_common);

  Common enumerate_common;
  EnumerateArgs enumerate_args;
  auto* enumerate = app.add_subcommand(
      "enumerate", "Enumerate feasible partial solutions per vehicle");
  add_instance_source(enumerate, enumerate_common);
  add_output(enumerate, enumerate_common, "the pools as JSON");
  add_threads(enumerate, enumerate_common);
  enumerate->add_option("--vehicle", enumerate_args.vehicle,
                        "Only this vehicle (1-based)")
      ->check(CLI::PositiveNumber);
  enumerate->add_option("--budget", enumerate_args.budget,
                        "Refuse scans over basis spaces larger than this");

  Common sample_common;
  SampleArgs sample_args;
  auto* sample = app.add_subcommand(
      "sample", "Simulate Grover sampling of one vehicle's feasible set");
  add_instance_source(sample, sample_common);
  add_output(sample, sample_common, "the trace/benchmark CSV");
  add_threads(sample, sample_common);
  auto* sample_targets = sample->add_option_group("targets");
  sample_targets->add_option("--vehicle", sample_args.vehicle,
                             "Sample this vehicle's feasible set (1-based)")
      ->check(CLI::PositiveNumber);
  sample_targets->add_option("--synthetic-k", sample_args.synthetic_k,
                             "Sample a synthetic target set of this size")
      ->check(CLI::PositiveNumber);
  sample_targets->require_option(1);
  sample->add_option("--pools", sample_args.pools_path,
                     "Load pools from this JSON file instead of enumerating");
  sample->add_option("--strategy", sample_args.strategy,
                     "Iteration strategy (ignored by --benchmark)")
      ->check(CLI::IsMember(
          {"constant", "decreasing", "increasing", "boyer", "classical"}));
  auto* seed_option =
      sample->add_option("--seed", sample_args.seed,
                         "Trace seed (benchmark: first of the seed range)");
  sample->add_option("--seeds", sample_args.seeds, "Benchmark seed count")
      ->check(CLI::PositiveNumber);
  sample->add_option("--max-runs", sample_args.max_runs, "Run budget per trace")
      ->check(CLI::PositiveNumber);
  sample->add_option("--stop-after", sample_args.stop_after,
                     "Stop after this many distinct targets (0: all)");
  sample->add_option("--iterations", sample_args.iterations,
                     "Override the constant strategy's iteration count");
  sample->add_flag("--benchmark", sample_args.benchmark,
                   "Aggregate all four strategies over --seeds seeds");

  Common solve_common;
  SolveArgs solve_args;
  auto* solve = app.add_subcommand(
      "solve", "Search the product of pools for the cheapest global solution");
  add_instance_source(solve, solve_common);
  add_output(solve, solve_common, "the result as JSON");
  add_threads(solve, solve_common);
  solve->add_option("--pools", solve_args.pools_path,
                    "Load pools from this JSON file instead of enumerating");
  solve->add_option("--method", solve_args.method, "Search method")
      ->check(CLI::IsMember({"brute", "greedy", "both"}));
  solve->add_option("--stats-out", solve_args.stats_path,
                    "Write the brute-force cost histogram CSV here");
  solve->add_option("--max-level", solve_args.max_level,
                    "Greedy level cutoff (-1: exhaustive)");
  solve->add_flag("--first-hit", solve_args.first_hit,
                  "Greedy stops at the first feasible tuple of a level");
  solve->add_option("--budget", solve_args.budget,
                    "Scan/product size limit for enumeration and brute force");

  Common hamiltonian_common;
  HamiltonianArgs hamiltonian_args;
  auto* hamiltonian = app.add_subcommand(
      "hamiltonian", "Scan one vehicle's diagonal Hamiltonian spectrum");
  add_instance_source(hamiltonian, hamiltonian_common);
  add_output(hamiltonian, hamiltonian_common, "the energy CSV");
  add_threads(hamiltonian, hamiltonian_common);
  hamiltonian->add_option("--vehicle", hamiltonian_args.vehicle, "Vehicle (1-based)")
      ->check(CLI::PositiveNumber);
  hamiltonian->add_option("--variant", hamiltonian_args.variant, "Penalty variant")
      ->check(CLI::IsMember({"verbatim", "indicator"}));
  hamiltonian->add_option("--lambda", hamiltonian_args.lambdas,
                          "Penalty weight(s): one value or five");
  hamiltonian->add_option("--top", hamiltonian_args.top,
                          "Number of lowest-energy rows to emit");
  hamiltonian->add_option("--budget", hamiltonian_args.budget,
                          "Refuse scans over basis spaces larger than this");

  CLI11_PARSE(app, argc, argv);
  sample_args.seed_given = seed_option->count() > 0;

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_common);
    if (app.got_subcommand(enumerate)) return cmd_enumerate(enumerate_common, enumerate_args);
    if (app.got_subcommand(sample)) return cmd_sample(sample_common, sample_args);
    if (app.got_subcommand(solve)) return cmd_solve(solve_common, solve_args);
    if (app.got_subcommand(hamiltonian))
      return cmd_hamiltonian(hamiltonian_common, hamiltonian_args);
  } catch (const SchemaError& e) {
    std::cerr << "invalid instance:\n";
    for (const auto& problem : e.problems) std::cerr << "  " << problem << "\n";
    return kSchemaFailure;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudgetFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  }
  return kOk;
}
