#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evcrp/encoding.hpp"
#include "evcrp/errors.hpp"

namespace evcrp {

struct PoolEntry {
  VehicleTrajectory trajectory;
  Rational cost;
  BigInt index;  // basis index in the per-vehicle qudit space
};

// Per-vehicle feasible trajectories, sorted by cost ascending, ties by
// basis index ascending.
struct PartialPool {
  int vehicle = 0;  // 1-based
  std::vector<PoolEntry> entries;
};

struct EnumerationOptions {
  std::uint64_t scan_budget = 1'000'000'000;
  int threads = 0;
};

// Exhaustively scans one vehicle's qudit space for trajectories that pass
// every per-vehicle constraint (C1-C6). Throws BudgetExceeded when the
// space exceeds the budget.
PartialPool enumerate_feasible(const Instance& inst, int vehicle_index,
                               const EnumerationOptions& options = {});

std::vector<PartialPool> enumerate_all_pools(const Instance& inst,
                                             const EnumerationOptions& options = {});

enum class SearchMethod { BruteForce, GreedyTree };

struct SearchResult {
  bool found = false;
  SearchMethod method = SearchMethod::BruteForce;
  GlobalSolution solution;
  Rational cost;
  std::vector<std::size_t> pool_indices;  // position of each vehicle's pick
  int level_reached = -1;                 // greedy: index-sum of the pick
  std::uint64_t combinations_examined = 0;
  bool is_certified_optimal = false;
};

struct GlobalStats {
  BigInt total_combinations;
  std::uint64_t feasible_combinations = 0;
  std::optional<Rational> min_cost;
  std::optional<Rational> max_cost;
  std::map<Rational, std::uint64_t> cost_histogram;  // feasible combos per cost
};

struct BruteForceOptions {
  std::uint64_t product_budget = 1'000'000'000;
};

// Checks every tuple of pool entries against C7 and returns the cheapest
// feasible combination (ties toward lexicographically smallest index
// tuple). Pass stats to additionally collect the full cost histogram.
SearchResult brute_force(const Instance& inst,
                         const std::vector<PartialPool>& pools,
                         const BruteForceOptions& options = {},
                         GlobalStats* stats = nullptr);

struct GreedyOptions {
  int max_level = -1;  // -1: sum of (pool size - 1)
  // Stop at the first feasible tuple instead of finishing its level.
  bool first_hit = false;
};

// Level-by-level search over pool index tuples: level L holds the tuples
// whose indices sum to L, visited in lexicographic order. Default returns
// the cheapest feasible tuple of the first level containing one.
SearchResult greedy_tree(const Instance& inst,
                         const std::vector<PartialPool>& pools,
                         const GreedyOptions& options = {});

// result cost / reference cost; throws std::invalid_argument on a
// non-positive reference.
Rational approximation_ratio(const Rational& achieved, const Rational& optimal);

// Bounded compositions: all tuples with 0 <= tuple[i] <= bounds[i] and a
// fixed sum, in lexicographic order. first_level_tuple returns nullopt when
// the level is empty; next_level_tuple advances in place.
std::optional<std::vector<int>> first_level_tuple(const std::vector<int>& bounds,
                                                  int level);
bool next_level_tuple(const std::vector<int>& bounds, std::vector<int>& tuple);
void for_each_level_tuple(const std::vector<int>& bounds, int level,
                          const std::function<bool(const std::vector<int>&)>& visit);

}  // namespace evcrp
