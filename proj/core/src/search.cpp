#include "evcrp/search.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "evcrp/errors.hpp"

namespace evcrp {

namespace {

// Locally feasible successors of a (cl, pos) state: combo index plus the
// successor state, precomputed once per instance for the pruned DFS.
struct TransitionMap {
  int d2 = 0, d3 = 0;
  struct Arc {
    int cl;
    int pow;
    int pos;
  };
  std::vector<std::vector<Arc>> arcs;  // by (cl - cl_min) * d3 + (pos - 1)
};

TransitionMap build_transitions(const Instance& inst) {
  TransitionMap map;
  map.d2 = inst.power_levels();
  map.d3 = inst.position_levels();
  const int d1 = inst.charge_levels();
  map.arcs.resize(static_cast<std::size_t>(d1) * map.d3);

  for (int prev_cl = inst.cl_min; prev_cl <= inst.cl_max; ++prev_cl) {
    for (int prev_pos = 1; prev_pos <= inst.num_nodes; ++prev_pos) {
      auto& out = map.arcs[static_cast<std::size_t>(prev_cl - inst.cl_min) * map.d3 +
                           (prev_pos - 1)];
      for (int cl = inst.cl_min; cl <= inst.cl_max; ++cl) {
        for (int pow = -inst.pow_max; pow <= inst.pow_max; ++pow) {
          for (int pos = 1; pos <= inst.num_nodes; ++pos) {
            bool ok;
            if (pos != prev_pos) {
              const auto& w = inst.edge_weight.at(prev_pos, pos);
              ok = w && pow == 0 && cl == prev_cl - *w;
            } else {
              ok = cl == prev_cl + pow;
            }
            if (!ok) continue;
            out.push_back({cl, pow, pos});
          }
        }
      }
    }
  }
  return map;
}

std::uint64_t run_greedy_level(const Instance& inst,
                               const std::vector<PartialPool>& pools,
                               const std::vector<int>& bounds, int level,
                               bool first_hit, SearchResult& result) {
  const int T = inst.num_steps;
  std::uint64_t examined = 0;
  std::vector<int> sums(static_cast<std::size_t>(T));

  for_each_level_tuple(bounds, level, [&](const std::vector<int>& tuple) {
    ++examined;
    std::fill(sums.begin(), sums.end(), 0);
    for (std::size_t n = 0; n < pools.size(); ++n) {
      const auto& pow = pools[n].entries[static_cast<std::size_t>(tuple[n])]
                            .trajectory.pow;
      for (int t = 0; t < T; ++t) sums[static_cast<std::size_t>(t)] += pow[static_cast<std::size_t>(t)];
    }
    bool feasible = true;
    for (int t = 0; t < T; ++t) {
      if (sums[static_cast<std::size_t>(t)] <= inst.pow_lim_neg ||
          sums[static_cast<std::size_t>(t)] >= inst.pow_lim_pos) {
        feasible = false;
        break;
      }
    }
    if (!feasible) return true;

    Rational cost = 0;
    for (std::size_t n = 0; n < pools.size(); ++n)
      cost += pools[n].entries[static_cast<std::size_t>(tuple[n])].cost;
    if (!result.found || cost < result.cost) {
      result.found = true;
      result.cost = cost;
      result.pool_indices.assign(tuple.begin(), tuple.end());
    }
    return !(first_hit && result.found);
  });
  return examined;
}

}  // namespace

PartialPool enumerate_feasible(const Instance& inst, int vehicle_index,
                               const EnumerationOptions& options) {
  const BigInt dim = search_space_size(inst, true);
  if (dim > options.scan_budget)
    throw BudgetExceeded("per-vehicle dimension " + dim.str() +
                         " exceeds scan budget " +
                         std::to_string(options.scan_budget));

  const VehicleSpec& spec = inst.vehicle(vehicle_index);
  const TransitionMap map = build_transitions(inst);
  const QuditLayout layout = QuditLayout::for_vehicle(inst);
  const int T = inst.num_steps;

  PartialPool pool;
  pool.vehicle = vehicle_index;

  // DFS from the C1/C2-pinned start over locally feasible transitions; the
  // boundary conditions at T are checked at the leaves. Combos are visited
  // ascending, so trajectories arrive in basis-index order.
  VehicleTrajectory v;
  v.cl.assign(static_cast<std::size_t>(T) + 1, spec.cl_initial);
  v.pos.assign(static_cast<std::size_t>(T) + 1, spec.pos_initial);
  v.pow.assign(static_cast<std::size_t>(T), 0);

  auto state_of = [&](int cl, int pos) {
    return static_cast<std::size_t>(cl - inst.cl_min) * map.d3 + (pos - 1);
  };

  auto dfs = [&](auto&& self, int t) -> void {
    if (t > T) {
      if (v.pos.back() != spec.pos_final || v.cl.back() < spec.cl_final_min) return;
      if (!check_partial(inst, vehicle_index, v).feasible) return;
      PoolEntry entry;
      entry.trajectory = v;
      entry.cost = trajectory_cost(inst, v);
      entry.index = layout.encode(v);
      pool.entries.push_back(std::move(entry));
      return;
    }
    const auto& arcs = map.arcs[state_of(v.cl[static_cast<std::size_t>(t - 1)],
                                         v.pos[static_cast<std::size_t>(t - 1)])];
    for (const auto& arc : arcs) {
      v.cl[static_cast<std::size_t>(t)] = arc.cl;
      v.pos[static_cast<std::size_t>(t)] = arc.pos;
      v.pow[static_cast<std::size_t>(t - 1)] = arc.pow;
      self(self, t + 1);
    }
  };
  dfs(dfs, 1);

  std::sort(pool.entries.begin(), pool.entries.end(),
            [](const PoolEntry& a, const PoolEntry& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              return a.index < b.index;
            });
  return pool;
}

std::vector<PartialPool> enumerate_all_pools(const Instance& inst,
                                             const EnumerationOptions& options) {
  std::vector<PartialPool> pools;
  pools.reserve(static_cast<std::size_t>(inst.num_vehicles));
  for (int n = 1; n <= inst.num_vehicles; ++n)
    pools.push_back(enumerate_feasible(inst, n, options));
  return pools;
}

SearchResult brute_force(const Instance& inst,
                         const std::vector<PartialPool>& pools,
                         const BruteForceOptions& options, GlobalStats* stats) {
  if (static_cast<int>(pools.size()) != inst.num_vehicles)
    throw std::invalid_argument("need one pool per vehicle");

  SearchResult result;
  result.method = SearchMethod::BruteForce;

  BigInt total = 1;
  for (const auto& pool : pools) total *= pool.entries.size();
  if (stats) {
    *stats = GlobalStats{};
    stats->total_combinations = total;
  }
  if (total == 0) return result;
  if (total > options.product_budget)
    throw BudgetExceeded("combination count " + total.str() +
                         " exceeds product budget " +
                         std::to_string(options.product_budget));

  const std::size_t N = pools.size();
  const int T = inst.num_steps;

  // Odometer over the Cartesian product with per-level running power sums
  // and costs; index tuples visited lexicographically, so the first strict
  // improvement is also the tie-broken winner.
  std::vector<std::size_t> tuple(N, 0);
  std::vector<std::vector<int>> sums(N + 1, std::vector<int>(static_cast<std::size_t>(T), 0));
  std::vector<Rational> costs(N + 1, Rational(0));

  auto apply_level = [&](std::size_t n) {
    const auto& entry = pools[n].entries[tuple[n]];
    auto& next = sums[n + 1];
    next = sums[n];
    for (int t = 0; t < T; ++t)
      next[static_cast<std::size_t>(t)] += entry.trajectory.pow[static_cast<std::size_t>(t)];
    costs[n + 1] = costs[n] + entry.cost;
  };

  for (std::size_t n = 0; n < N; ++n) apply_level(n);
  for (;;) {
    ++result.combinations_examined;
    bool feasible = true;
    const auto& fleet_sums = sums[N];
    for (int t = 0; t < T; ++t) {
      if (fleet_sums[static_cast<std::size_t>(t)] <= inst.pow_lim_neg ||
          fleet_sums[static_cast<std::size_t>(t)] >= inst.pow_lim_pos) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      const Rational& cost = costs[N];
      if (stats) {
        ++stats->feasible_combinations;
        ++stats->cost_histogram[cost];
        if (!stats->min_cost || cost < *stats->min_cost) stats->min_cost = cost;
        if (!stats->max_cost || cost > *stats->max_cost) stats->max_cost = cost;
      }
      if (!result.found || cost < result.cost) {
        result.found = true;
        result.cost = cost;
        result.pool_indices.assign(tuple.begin(), tuple.end());
      }
    }

    std::size_t level = N;
    while (level > 0 && ++tuple[level - 1] == pools[level - 1].entries.size()) {
      tuple[level - 1] = 0;
      --level;
    }
    if (level == 0) break;
    for (std::size_t n = level - 1; n < N; ++n) apply_level(n);
  }

  if (result.found) {
    result.is_certified_optimal = true;
    for (std::size_t n = 0; n < N; ++n)
      result.solution.trajectories.push_back(
          pools[n].entries[result.pool_indices[n]].trajectory);
  }
  return result;
}

SearchResult greedy_tree(const Instance& inst,
                         const std::vector<PartialPool>& pools,
                         const GreedyOptions& options) {
  if (static_cast<int>(pools.size()) != inst.num_vehicles)
    throw std::invalid_argument("need one pool per vehicle");

  SearchResult result;
  result.method = SearchMethod::GreedyTree;

  std::vector<int> bounds;
  bounds.reserve(pools.size());
  int exhaustive_level = 0;
  for (const auto& pool : pools) {
    if (pool.entries.empty()) return result;
    bounds.push_back(static_cast<int>(pool.entries.size()) - 1);
    exhaustive_level += bounds.back();
  }
  const int max_level =
      options.max_level < 0 ? exhaustive_level : std::min(options.max_level,
                                                          exhaustive_level);

  for (int level = 0; level <= max_level; ++level) {
    result.combinations_examined +=
        run_greedy_level(inst, pools, bounds, level, options.first_hit, result);
    if (result.found) {
      result.level_reached = level;
      break;
    }
  }
  if (!result.found) {
    result.level_reached = max_level;
    return result;
  }

  for (std::size_t n = 0; n < pools.size(); ++n)
    result.solution.trajectories.push_back(
        pools[n].entries[result.pool_indices[n]].trajectory);
  return result;
}

Rational approximation_ratio(const Rational& achieved, const Rational& optimal) {
  if (optimal <= 0)
    throw std::invalid_argument("approximation ratio needs a positive optimum");
  return achieved / optimal;
}

std::optional<std::vector<int>> first_level_tuple(const std::vector<int>& bounds,
                                                  int level) {
  if (level < 0) return std::nullopt;
  std::vector<int> suffix(bounds.size() + 1, 0);
  for (std::size_t i = bounds.size(); i > 0; --i)
    suffix[i - 1] = suffix[i] + bounds[i - 1];
  if (level > suffix[0]) return std::nullopt;

  std::vector<int> tuple(bounds.size(), 0);
  int rest = level;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    tuple[i] = std::max(0, rest - suffix[i + 1]);
    rest -= tuple[i];
  }
  return tuple;
}

bool next_level_tuple(const std::vector<int>& bounds, std::vector<int>& tuple) {
  const std::size_t n = bounds.size();
  int suffix_sum = 0;     // sum of tuple entries after position i
  int suffix_bounds = 0;  // sum of bounds after position i
  for (std::size_t i = n; i > 1; --i) {
    suffix_sum += tuple[i - 1];
    suffix_bounds += bounds[i - 1];
    const std::size_t pos = i - 2;
    if (tuple[pos] < bounds[pos] && suffix_sum >= 1) {
      ++tuple[pos];
      // refill the suffix minimally with one unit less
      int rest = suffix_sum - 1;
      int remaining_bounds = suffix_bounds;
      for (std::size_t j = pos + 1; j < n; ++j) {
        remaining_bounds -= bounds[j];
        tuple[j] = std::max(0, rest - remaining_bounds);
        rest -= tuple[j];
      }
      return true;
    }
  }
  return false;
}

void for_each_level_tuple(const std::vector<int>& bounds, int level,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  auto tuple = first_level_tuple(bounds, level);
  if (!tuple) return;
  while (visit(*tuple)) {
    if (!next_level_tuple(bounds, *tuple)) return;
  }
}

}  // namespace evcrp
