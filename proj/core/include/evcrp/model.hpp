#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evcrp/rational.hpp"

namespace evcrp {

// Fixed boundary data of one vehicle: start/end node, initial charge and
// the minimum acceptable final charge.
struct VehicleSpec {
  int pos_initial = 1;
  int pos_final = 1;
  int cl_initial = 0;
  int cl_final_min = 0;

  bool operator==(const VehicleSpec&) const = default;
};

// Square matrix of per-edge energy losses. An absent entry means the road
// does not exist; absence is an explicit state, never a numeric sentinel,
// so it can't leak into arithmetic. Node ids are 1-based.
class EdgeWeights {
 public:
  EdgeWeights() = default;
  explicit EdgeWeights(int num_nodes)
      : num_nodes_(num_nodes),
        cells_(static_cast<std::size_t>(num_nodes) * num_nodes) {}

  std::optional<int>& at(int from, int to);
  const std::optional<int>& at(int from, int to) const;
  int num_nodes() const { return num_nodes_; }

  bool operator==(const EdgeWeights&) const = default;

 private:
  int num_nodes_ = 0;
  std::vector<std::optional<int>> cells_;  // row-major
};

// One problem instance: N vehicles routed and charged over T discrete steps
// on a grid of num_nodes stations. Power per step is bounded symmetrically
// by pow_max, so the power domain {-pow_max..pow_max} always has odd size.
struct Instance {
  int num_vehicles = 0;  // N
  int num_steps = 0;     // T
  int num_nodes = 0;
  EdgeWeights edge_weight;
  std::vector<Rational> buy_price;   // length T, price per unit bought
  std::vector<Rational> sell_price;  // length T, price per unit sold
  int pow_max = 1;
  int cl_min = 0;
  int cl_max = 0;
  int pow_lim_neg = 0;  // grid tolerance, strict lower bound on fleet power
  int pow_lim_pos = 0;  // strict upper bound
  std::vector<VehicleSpec> vehicles;

  int charge_levels() const { return cl_max - cl_min + 1; }  // d1
  int power_levels() const { return 2 * pow_max + 1; }       // d2, odd
  int position_levels() const { return num_nodes; }          // d3

  bool cl_in_domain(int cl) const { return cl >= cl_min && cl <= cl_max; }
  bool pow_in_domain(int pow) const { return pow >= -pow_max && pow <= pow_max; }
  bool pos_in_domain(int pos) const { return pos >= 1 && pos <= num_nodes; }

  // 1-based; throws std::out_of_range.
  const VehicleSpec& vehicle(int vehicle_index) const;

  bool operator==(const Instance&) const = default;
};

// One vehicle's schedule. cl and pos carry the t=0 state in front, pow
// holds steps 1..T (pow[t-1] is the flow during step t).
struct VehicleTrajectory {
  std::vector<int> cl;   // length T+1
  std::vector<int> pow;  // length T
  std::vector<int> pos;  // length T+1

  bool operator==(const VehicleTrajectory&) const = default;
};

struct GlobalSolution {
  std::vector<VehicleTrajectory> trajectories;  // one per vehicle

  bool operator==(const GlobalSolution&) const = default;
};

enum class Constraint { C1, C2, C3, C4, C5, C6, C7 };

const char* constraint_name(Constraint c);

struct Violation {
  Constraint constraint = Constraint::C1;
  // 0 or T for boundary conditions, 1..T for step transitions.
  int time_step = 0;
  // 1-based vehicle; empty for fleet-wide entries (C7).
  std::optional<int> vehicle;

  bool operator==(const Violation&) const = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> problems;
};

// Schema-level checks on the instance data itself (lengths, domains,
// diagonal, limit ordering). Never throws; the verdict carries failures.
ValidationReport validate_instance(const Instance& inst);

// Money spent over the trajectory: each bought unit costs buy_price[t],
// each sold unit earns sell_price[t]. Throws std::invalid_argument on
// malformed sizes or out-of-domain entries.
Rational trajectory_cost(const Instance& inst, const VehicleTrajectory& v);

// Sum of trajectory costs over the fleet.
Rational solution_cost(const Instance& inst, const GlobalSolution& s);

// Per-vehicle constraint check (C1..C6). MOVE steps (position changes)
// require an existing edge, zero power and the edge's energy loss; STAY
// steps require the charge to change by exactly the power drawn. Domain
// breaches are reported as C6. vehicle_index is 1-based.
FeasibilityReport check_partial(const Instance& inst, int vehicle_index,
                                const VehicleTrajectory& v);

// All per-vehicle checks plus the grid constraint C7: at every step the
// fleet power sum must satisfy pow_lim_neg < sum < pow_lim_pos (strict).
FeasibilityReport check_global(const Instance& inst, const GlobalSolution& s);

// The built-in benchmark instance: 4 vehicles, 4 steps, 4 nodes.
Instance toy_instance();

}  // namespace evcrp
