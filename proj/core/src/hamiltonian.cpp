#include "evcrp/hamiltonian.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

#include "evcrp/parallel.hpp"

namespace evcrp {

namespace {

void require_shape(const Instance& inst, const VehicleTrajectory& v) {
  const auto steps = static_cast<std::size_t>(inst.num_steps);
  if (v.cl.size() != steps + 1 || v.pos.size() != steps + 1 || v.pow.size() != steps)
    throw std::invalid_argument("trajectory arrays do not match num_steps");
}

bool locally_feasible_step(const Instance& inst, int prev_cl, int prev_pos,
                           int cl, int pow, int pos) {
  if (prev_pos != pos) {
    const auto& w = inst.edge_weight.at(prev_pos, pos);
    return w && pow == 0 && cl == prev_cl - *w;
  }
  return cl == prev_cl + pow;
}

// --- scaled-integer scan engine -------------------------------------------
//
// Exhaustive per-vehicle scans walk up to ~1e9 basis states, so the inner
// loop works on precomputed int64 energy tables instead of rationals. All
// energies are multiplied by a common denominator, which keeps comparisons
// exact. Tables are indexed by the previous (cl, pos) state and the current
// step's (cl, pow, pos) combo; the t=0 boundary terms live in `b0`, the t=T
// boundary terms are folded into the last level's table.
struct ScanTables {
  int d1 = 0, d2 = 0, d3 = 0;
  int combos = 0;     // d1*d2*d3, one step's digit block
  int prev_states = 0;  // d1*d3
  int num_steps = 0;
  std::vector<std::int64_t> b0;     // [prev_state]
  std::vector<std::int64_t> step;   // [t-1][prev_state][combo], flattened
  std::vector<int> combo_cl, combo_pow, combo_pos;  // digit values per combo
};

std::int64_t common_scale(const Instance& inst, const PenaltyWeights& weights,
                          bool include_cost) {
  std::int64_t scale = 1;
  auto fold = [&scale](const Rational& r) {
    scale = std::lcm(scale, r.denominator());
    if (scale > (std::int64_t{1} << 40))
      throw std::invalid_argument("energy denominators too large for scaled scan");
  };
  for (const auto& l : weights.lambda) fold(l);
  if (include_cost) {
    for (const auto& p : inst.buy_price) fold(p);
    for (const auto& p : inst.sell_price) fold(p);
  }
  return scale;
}

std::int64_t scaled(const Rational& r, std::int64_t scale) {
  const Rational s = r * scale;
  if (s.denominator() != 1)
    throw std::logic_error("scale does not clear energy denominator");
  return s.numerator();
}

ScanTables build_tables(const Instance& inst, const VehicleSpec& spec,
                        const PenaltyWeights& weights, bool include_cost,
                        std::int64_t scale) {
  ScanTables tables;
  tables.d1 = inst.charge_levels();
  tables.d2 = inst.power_levels();
  tables.d3 = inst.position_levels();
  tables.combos = tables.d1 * tables.d2 * tables.d3;
  tables.prev_states = tables.d1 * tables.d3;
  tables.num_steps = inst.num_steps;

  tables.combo_cl.resize(static_cast<std::size_t>(tables.combos));
  tables.combo_pow.resize(static_cast<std::size_t>(tables.combos));
  tables.combo_pos.resize(static_cast<std::size_t>(tables.combos));
  for (int c = 0; c < tables.combos; ++c) {
    tables.combo_cl[static_cast<std::size_t>(c)] =
        inst.cl_min + c / (tables.d2 * tables.d3);
    tables.combo_pow[static_cast<std::size_t>(c)] =
        (c / tables.d3) % tables.d2 - inst.pow_max;
    tables.combo_pos[static_cast<std::size_t>(c)] = c % tables.d3 + 1;
  }

  const auto& l = weights.lambda;
  const bool verbatim = weights.variant == PenaltyVariant::Verbatim;

  tables.b0.resize(static_cast<std::size_t>(tables.prev_states));
  for (int p = 0; p < tables.prev_states; ++p) {
    const int cl = inst.cl_min + p / tables.d3;
    const int pos = p % tables.d3 + 1;
    Rational e = 0;
    if (pos == spec.pos_initial) e -= l[0];
    if (cl == spec.cl_initial) e -= l[1];
    tables.b0[static_cast<std::size_t>(p)] = scaled(e, scale);
  }

  tables.step.resize(static_cast<std::size_t>(tables.num_steps) *
                     tables.prev_states * tables.combos);
  for (int t = 1; t <= tables.num_steps; ++t) {
    for (int p = 0; p < tables.prev_states; ++p) {
      const int prev_cl = inst.cl_min + p / tables.d3;
      const int prev_pos = p % tables.d3 + 1;
      for (int c = 0; c < tables.combos; ++c) {
        const int cl = tables.combo_cl[static_cast<std::size_t>(c)];
        const int pow = tables.combo_pow[static_cast<std::size_t>(c)];
        const int pos = tables.combo_pos[static_cast<std::size_t>(c)];
        Rational e = 0;
        if (verbatim) {
          if (pos != prev_pos && pow == 0) e -= l[2];
          if (pow != 0 && cl == prev_cl + pow) e -= l[3];
          if (pos != prev_pos) {
            const auto& w = inst.edge_weight.at(prev_pos, pos);
            if (w && cl == prev_cl - *w) e -= l[4];
          }
        } else if (locally_feasible_step(inst, prev_cl, prev_pos, cl, pow, pos)) {
          e -= l[2];
        }
        if (include_cost && pow != 0)
          e += Rational(pow) * (pow > 0
                                    ? inst.buy_price[static_cast<std::size_t>(t - 1)]
                                    : inst.sell_price[static_cast<std::size_t>(t - 1)]);
        if (t == tables.num_steps) {
          if (pos == spec.pos_final) e -= l[0];
          if (cl >= spec.cl_final_min) e -= l[1];
        }
        tables.step[(static_cast<std::size_t>(t - 1) * tables.prev_states + p) *
                        tables.combos +
                    c] = scaled(e, scale);
      }
    }
  }

  // With <= num_steps + 2 additions per leaf, per-cell magnitudes below this
  // bound keep every partial sum inside int64.
  std::int64_t max_cell = 0;
  for (auto v : tables.b0) max_cell = std::max(max_cell, std::abs(v));
  for (auto v : tables.step) max_cell = std::max(max_cell, std::abs(v));
  if (max_cell > std::numeric_limits<std::int64_t>::max() / (4 * (tables.num_steps + 2)))
    throw std::invalid_argument("penalty weights too large for scaled scan");

  return tables;
}

std::uint64_t checked_dimension(const Instance& inst, const ScanOptions& options) {
  const BigInt dim = search_space_size(inst, true);
  if (dim > options.dimension_budget)
    throw BudgetExceeded("per-vehicle dimension " + dim.str() +
                         " exceeds scan budget " +
                         std::to_string(options.dimension_budget));
  return dim.convert_to<std::uint64_t>();
}

// Calls visit(index, scaled_energy) for every basis state whose first two
// digits form `prefix`, ascending by index.
template <typename Visit>
void scan_prefix(const ScanTables& tables, int prefix, Visit&& visit) {
  const int levels = tables.num_steps;
  const std::uint64_t combos = static_cast<std::uint64_t>(tables.combos);

  // state per level: chosen combo, cumulative energy, base index, prev state
  std::vector<int> combo(static_cast<std::size_t>(levels), 0);
  std::vector<std::int64_t> energy(static_cast<std::size_t>(levels + 1));
  std::vector<std::uint64_t> base(static_cast<std::size_t>(levels + 1));
  std::vector<int> prev(static_cast<std::size_t>(levels + 1));
  energy[0] = tables.b0[static_cast<std::size_t>(prefix)];
  base[0] = static_cast<std::uint64_t>(prefix);
  prev[0] = prefix;

  auto descend = [&](int level) {
    // level in 1..levels-1; fix combo[level-1], prepare level+1 inputs
    const int c = combo[static_cast<std::size_t>(level - 1)];
    const auto row = static_cast<std::size_t>(level - 1) * tables.prev_states +
                     static_cast<std::size_t>(prev[static_cast<std::size_t>(level - 1)]);
    energy[static_cast<std::size_t>(level)] =
        energy[static_cast<std::size_t>(level - 1)] +
        tables.step[row * combos + static_cast<std::size_t>(c)];
    base[static_cast<std::size_t>(level)] =
        base[static_cast<std::size_t>(level - 1)] * combos +
        static_cast<std::uint64_t>(c);
    prev[static_cast<std::size_t>(level)] =
        (c / tables.d2 / tables.d3) * tables.d3 + c % tables.d3;
  };

  if (levels == 1) {
    const std::int64_t* row = &tables.step[static_cast<std::size_t>(prefix) * combos];
    const std::uint64_t idx_base = base[0] * combos;
    const std::int64_t e = energy[0];
    for (std::uint64_t c = 0; c < combos; ++c) visit(idx_base + c, e + row[c]);
    return;
  }

  for (;;) {
    for (int level = 1; level < levels; ++level) descend(level);

    const auto last_row =
        (static_cast<std::size_t>(levels - 1) * tables.prev_states +
         static_cast<std::size_t>(prev[static_cast<std::size_t>(levels - 1)])) *
        combos;
    const std::int64_t* row = &tables.step[last_row];
    const std::uint64_t idx_base = base[static_cast<std::size_t>(levels - 1)] * combos;
    const std::int64_t e = energy[static_cast<std::size_t>(levels - 1)];
    for (std::uint64_t c = 0; c < combos; ++c) visit(idx_base + c, e + row[c]);

    // odometer over levels 1..levels-1, least significant last
    int level = levels - 1;
    while (level >= 1 &&
           ++combo[static_cast<std::size_t>(level - 1)] == tables.combos) {
      combo[static_cast<std::size_t>(level - 1)] = 0;
      --level;
    }
    if (level < 1) return;
  }
}

struct PrefixArgmin {
  std::int64_t energy = std::numeric_limits<std::int64_t>::max();
  std::uint64_t index = 0;
};

// Scans the whole space in prefix-sized jobs and returns per-prefix argmins
// (ties toward the smaller index within and across prefixes).
std::vector<PrefixArgmin> scan_argmin(const ScanTables& tables, int threads) {
  std::vector<PrefixArgmin> slots(static_cast<std::size_t>(tables.prev_states));
  run_jobs(static_cast<std::uint64_t>(tables.prev_states), threads,
           [&](std::uint64_t job) {
             PrefixArgmin best;
             scan_prefix(tables, static_cast<int>(job),
                         [&](std::uint64_t index, std::int64_t energy) {
                           if (energy < best.energy) {
                             best.energy = energy;
                             best.index = index;
                           }
                         });
             slots[job] = best;
           });
  return slots;
}

}  // namespace

PenaltyWeights PenaltyWeights::uniform(const Rational& value, PenaltyVariant variant) {
  PenaltyWeights weights;
  weights.lambda.fill(value);
  weights.variant = variant;
  return weights;
}

void PenaltyWeights::validate() const {
  for (const auto& l : lambda)
    if (l <= 0) throw std::invalid_argument("penalty weights must be positive");
}

Rational cost_energy(const Instance& inst, const VehicleTrajectory& v) {
  require_shape(inst, v);
  Rational energy = 0;
  for (int t = 1; t <= inst.num_steps; ++t) {
    const int pow = v.pow[static_cast<std::size_t>(t - 1)];
    if (!inst.pow_in_domain(pow))
      throw std::invalid_argument("power value outside domain");
    for (int j = -inst.pow_max; j <= inst.pow_max; ++j) {
      if (pow != j) continue;
      if (j > 0)
        energy += Rational(j) * inst.buy_price[static_cast<std::size_t>(t - 1)];
      else if (j < 0)
        energy += Rational(j) * inst.sell_price[static_cast<std::size_t>(t - 1)];
    }
  }
  return energy;
}

std::array<int, 5> verbatim_multiplicities(const Instance& inst,
                                           const VehicleSpec& spec,
                                           const VehicleTrajectory& v) {
  require_shape(inst, v);
  std::array<int, 5> m{};
  if (v.pos.front() == spec.pos_initial) ++m[0];
  if (v.pos.back() == spec.pos_final) ++m[0];
  if (v.cl.front() == spec.cl_initial) ++m[1];
  if (v.cl.back() >= spec.cl_final_min) ++m[1];
  for (int t = 1; t <= inst.num_steps; ++t) {
    const int prev_pos = v.pos[static_cast<std::size_t>(t - 1)];
    const int pos = v.pos[static_cast<std::size_t>(t)];
    const int prev_cl = v.cl[static_cast<std::size_t>(t - 1)];
    const int cl = v.cl[static_cast<std::size_t>(t)];
    const int pow = v.pow[static_cast<std::size_t>(t - 1)];
    if (prev_pos != pos && pow == 0) ++m[2];
    if (pow != 0 && cl == prev_cl + pow) ++m[3];
    if (prev_pos != pos) {
      const auto& w = inst.edge_weight.at(prev_pos, pos);
      if (w && cl == prev_cl - *w) ++m[4];
    }
  }
  return m;
}

std::array<int, 5> indicator_multiplicities(const Instance& inst,
                                            const VehicleSpec& spec,
                                            const VehicleTrajectory& v) {
  require_shape(inst, v);
  std::array<int, 5> m{};
  if (v.pos.front() == spec.pos_initial) ++m[0];
  if (v.pos.back() == spec.pos_final) ++m[0];
  if (v.cl.front() == spec.cl_initial) ++m[1];
  if (v.cl.back() >= spec.cl_final_min) ++m[1];
  for (int t = 1; t <= inst.num_steps; ++t) {
    if (locally_feasible_step(inst, v.cl[static_cast<std::size_t>(t - 1)],
                              v.pos[static_cast<std::size_t>(t - 1)],
                              v.cl[static_cast<std::size_t>(t)],
                              v.pow[static_cast<std::size_t>(t - 1)],
                              v.pos[static_cast<std::size_t>(t)]))
      ++m[2];
  }
  return m;
}

std::array<Rational, 5> constraint_energy_verbatim(
    const Instance& inst, const VehicleSpec& spec, const VehicleTrajectory& v,
    const std::array<Rational, 5>& lambda) {
  const auto m = verbatim_multiplicities(inst, spec, v);
  std::array<Rational, 5> terms{};
  for (std::size_t i = 0; i < 5; ++i) terms[i] = Rational(-m[i]) * lambda[i];
  return terms;
}

std::array<Rational, 5> constraint_energy_indicator(
    const Instance& inst, const VehicleSpec& spec, const VehicleTrajectory& v,
    const std::array<Rational, 5>& lambda) {
  const auto m = indicator_multiplicities(inst, spec, v);
  std::array<Rational, 5> terms{};
  for (std::size_t i = 0; i < 5; ++i) terms[i] = Rational(-m[i]) * lambda[i];
  return terms;
}

EnergyBreakdown total_energy(const Instance& inst, const VehicleSpec& spec,
                             const VehicleTrajectory& v,
                             const PenaltyWeights& weights) {
  weights.validate();
  EnergyBreakdown breakdown;
  breakdown.cost_term = cost_energy(inst, v);
  breakdown.constraint_terms =
      weights.variant == PenaltyVariant::Verbatim
          ? constraint_energy_verbatim(inst, spec, v, weights.lambda)
          : constraint_energy_indicator(inst, spec, v, weights.lambda);
  breakdown.total = breakdown.cost_term;
  for (const auto& term : breakdown.constraint_terms) breakdown.total += term;
  return breakdown;
}

GroundState ground_state_exhaustive(const Instance& inst, int vehicle_index,
                                    const PenaltyWeights& weights,
                                    const ScanOptions& options) {
  weights.validate();
  checked_dimension(inst, options);
  const VehicleSpec& spec = inst.vehicle(vehicle_index);
  const std::int64_t scale = common_scale(inst, weights, true);
  const ScanTables tables = build_tables(inst, spec, weights, true, scale);

  const auto slots = scan_argmin(tables, options.threads);
  PrefixArgmin best;
  for (const auto& slot : slots)
    if (slot.energy < best.energy) best = slot;

  GroundState state;
  state.index = best.index;
  state.trajectory = QuditLayout::for_vehicle(inst).decode(state.index);
  state.energy = total_energy(inst, spec, state.trajectory, weights);
  return state;
}

std::vector<BigInt> minimum_constraint_energy_states(
    const Instance& inst, int vehicle_index, const PenaltyWeights& weights,
    const ScanOptions& options, std::size_t max_states) {
  weights.validate();
  checked_dimension(inst, options);
  const VehicleSpec& spec = inst.vehicle(vehicle_index);
  // Zero lambdas never reach the scaled tables' denominators, so cost can be
  // excluded by simply not folding prices into the scale.
  const std::int64_t scale = common_scale(inst, weights, false);
  const ScanTables tables = build_tables(inst, spec, weights, false, scale);

  struct Slot {
    std::int64_t energy = std::numeric_limits<std::int64_t>::max();
    std::vector<std::uint64_t> indices;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(tables.prev_states));
  std::atomic<bool> overflow{false};
  run_jobs(static_cast<std::uint64_t>(tables.prev_states), options.threads,
           [&](std::uint64_t job) {
             Slot& slot = slots[job];
             scan_prefix(tables, static_cast<int>(job),
                         [&](std::uint64_t index, std::int64_t energy) {
                           if (energy > slot.energy) return;
                           if (energy < slot.energy) {
                             slot.energy = energy;
                             slot.indices.clear();
                           }
                           if (slot.indices.size() >= max_states)
                             overflow.store(true, std::memory_order_relaxed);
                           else
                             slot.indices.push_back(index);
                         });
           });

  std::int64_t min_energy = std::numeric_limits<std::int64_t>::max();
  for (const auto& slot : slots) min_energy = std::min(min_energy, slot.energy);
  std::vector<BigInt> result;
  for (const auto& slot : slots) {
    if (slot.energy != min_energy) continue;
    for (const auto index : slot.indices) {
      if (result.size() >= max_states)
        throw std::runtime_error("minimum-energy set exceeds max_states");
      result.emplace_back(index);
    }
  }
  if (overflow.load() && result.size() >= max_states)
    throw std::runtime_error("minimum-energy set exceeds max_states");
  return result;
}

std::vector<EnergyRow> lowest_energy_states(const Instance& inst,
                                            int vehicle_index,
                                            const PenaltyWeights& weights,
                                            std::size_t count,
                                            const ScanOptions& options) {
  weights.validate();
  if (count == 0) return {};
  checked_dimension(inst, options);
  const VehicleSpec& spec = inst.vehicle(vehicle_index);
  const std::int64_t scale = common_scale(inst, weights, true);
  const ScanTables tables = build_tables(inst, spec, weights, true, scale);

  using Entry = std::pair<std::int64_t, std::uint64_t>;  // (energy, index)
  std::vector<std::vector<Entry>> slots(static_cast<std::size_t>(tables.prev_states));
  run_jobs(static_cast<std::uint64_t>(tables.prev_states), options.threads,
           [&](std::uint64_t job) {
             std::priority_queue<Entry> heap;  // largest kept on top
             scan_prefix(tables, static_cast<int>(job),
                         [&](std::uint64_t index, std::int64_t energy) {
                           if (heap.size() < count) {
                             heap.emplace(energy, index);
                           } else if (Entry(energy, index) < heap.top()) {
                             heap.pop();
                             heap.emplace(energy, index);
                           }
                         });
             auto& out = slots[job];
             out.reserve(heap.size());
             while (!heap.empty()) {
               out.push_back(heap.top());
               heap.pop();
             }
           });

  std::vector<Entry> merged;
  for (const auto& slot : slots) merged.insert(merged.end(), slot.begin(), slot.end());
  std::sort(merged.begin(), merged.end());
  if (merged.size() > count) merged.resize(count);

  const QuditLayout layout = QuditLayout::for_vehicle(inst);
  std::vector<EnergyRow> rows;
  rows.reserve(merged.size());
  for (const auto& [energy, index] : merged) {
    EnergyRow row;
    row.index = index;
    const VehicleTrajectory v = layout.decode(row.index);
    row.energy = total_energy(inst, spec, v, weights);
    row.feasible = check_partial(inst, vehicle_index, v).feasible;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace evcrp
