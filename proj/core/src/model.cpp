#include "evcrp/model.hpp"

#include <stdexcept>
#include <string>

namespace evcrp {

namespace {

void append(std::vector<std::string>& problems, const std::string& text) {
  problems.push_back(text);
}

void require_shape(const Instance& inst, const VehicleTrajectory& v) {
  const auto steps = static_cast<std::size_t>(inst.num_steps);
  if (v.cl.size() != steps + 1 || v.pos.size() != steps + 1 || v.pow.size() != steps)
    throw std::invalid_argument("trajectory arrays do not match num_steps");
}

}  // namespace

std::optional<int>& EdgeWeights::at(int from, int to) {
  return const_cast<std::optional<int>&>(
      static_cast<const EdgeWeights&>(*this).at(from, to));
}

const std::optional<int>& EdgeWeights::at(int from, int to) const {
  if (from < 1 || from > num_nodes_ || to < 1 || to > num_nodes_)
    throw std::out_of_range("edge node index out of range");
  return cells_[static_cast<std::size_t>(from - 1) * num_nodes_ + (to - 1)];
}

const VehicleSpec& Instance::vehicle(int vehicle_index) const {
  if (vehicle_index < 1 || vehicle_index > static_cast<int>(vehicles.size()))
    throw std::out_of_range("vehicle index out of range");
  return vehicles[static_cast<std::size_t>(vehicle_index - 1)];
}

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::C1: return "C1";
    case Constraint::C2: return "C2";
    case Constraint::C3: return "C3";
    case Constraint::C4: return "C4";
    case Constraint::C5: return "C5";
    case Constraint::C6: return "C6";
    case Constraint::C7: return "C7";
  }
  return "?";
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto& problems = report.problems;

  if (inst.num_vehicles < 1) append(problems, "num_vehicles must be >= 1");
  if (inst.num_steps < 1) append(problems, "num_steps must be >= 1");
  if (inst.num_nodes < 1) append(problems, "num_nodes must be >= 1");
  if (static_cast<int>(inst.vehicles.size()) != inst.num_vehicles)
    append(problems, "vehicles length != num_vehicles");
  if (inst.edge_weight.num_nodes() != inst.num_nodes)
    append(problems, "edge_weight is not a num_nodes x num_nodes matrix");
  if (static_cast<int>(inst.buy_price.size()) != inst.num_steps)
    append(problems, "buy_price length != num_steps");
  if (static_cast<int>(inst.sell_price.size()) != inst.num_steps)
    append(problems, "sell_price length != num_steps");
  if (inst.cl_min > inst.cl_max) append(problems, "cl_min > cl_max");
  if (inst.pow_max < 0) append(problems, "pow_max must be >= 0");
  if (inst.pow_lim_neg >= inst.pow_lim_pos)
    append(problems, "pow_lim_neg must be < pow_lim_pos");

  if (inst.edge_weight.num_nodes() == inst.num_nodes) {
    for (int from = 1; from <= inst.num_nodes; ++from) {
      for (int to = 1; to <= inst.num_nodes; ++to) {
        const auto& w = inst.edge_weight.at(from, to);
        if (!w) continue;
        if (from == to && *w != 0)
          append(problems, "nonzero diagonal edge weight at node " +
                               std::to_string(from));
        if (*w < 0)
          append(problems, "negative edge weight " + std::to_string(from) +
                               "->" + std::to_string(to));
      }
    }
  }

  for (std::size_t i = 0; i < inst.vehicles.size(); ++i) {
    const auto& spec = inst.vehicles[i];
    const std::string tag = "vehicle " + std::to_string(i + 1) + ": ";
    if (!inst.pos_in_domain(spec.pos_initial))
      append(problems, tag + "pos_initial outside 1..num_nodes");
    if (!inst.pos_in_domain(spec.pos_final))
      append(problems, tag + "pos_final outside 1..num_nodes");
    if (!inst.cl_in_domain(spec.cl_initial))
      append(problems, tag + "cl_initial outside charge domain");
    if (spec.cl_final_min > inst.cl_max)
      append(problems, tag + "cl_final_min above cl_max");
  }

  report.valid = problems.empty();
  return report;
}

Rational trajectory_cost(const Instance& inst, const VehicleTrajectory& v) {
  require_shape(inst, v);
  Rational cost = 0;
  for (int t = 1; t <= inst.num_steps; ++t) {
    const int pow = v.pow[static_cast<std::size_t>(t - 1)];
    if (!inst.pow_in_domain(pow))
      throw std::invalid_argument("power value outside domain");
    if (pow > 0)
      cost += Rational(pow) * inst.buy_price[static_cast<std::size_t>(t - 1)];
    else if (pow < 0)
      cost += Rational(pow) * inst.sell_price[static_cast<std::size_t>(t - 1)];
  }
  return cost;
}

Rational solution_cost(const Instance& inst, const GlobalSolution& s) {
  Rational cost = 0;
  for (const auto& v : s.trajectories) cost += trajectory_cost(inst, v);
  return cost;
}

FeasibilityReport check_partial(const Instance& inst, int vehicle_index,
                                const VehicleTrajectory& v) {
  require_shape(inst, v);
  const VehicleSpec& spec = inst.vehicle(vehicle_index);

  FeasibilityReport report;
  auto flag = [&](Constraint c, int t) {
    report.violations.push_back({c, t, vehicle_index});
  };

  for (int t = 0; t <= inst.num_steps; ++t) {
    if (!inst.cl_in_domain(v.cl[static_cast<std::size_t>(t)])) flag(Constraint::C6, t);
    if (t >= 1 && !inst.pow_in_domain(v.pow[static_cast<std::size_t>(t - 1)]))
      flag(Constraint::C6, t);
    if (!inst.pos_in_domain(v.pos[static_cast<std::size_t>(t)])) flag(Constraint::C6, t);
  }

  if (v.pos.front() != spec.pos_initial) flag(Constraint::C1, 0);
  if (v.pos.back() != spec.pos_final) flag(Constraint::C1, inst.num_steps);
  if (v.cl.front() != spec.cl_initial) flag(Constraint::C2, 0);
  if (v.cl.back() < spec.cl_final_min) flag(Constraint::C2, inst.num_steps);

  for (int t = 1; t <= inst.num_steps; ++t) {
    const int prev_pos = v.pos[static_cast<std::size_t>(t - 1)];
    const int pos = v.pos[static_cast<std::size_t>(t)];
    const int prev_cl = v.cl[static_cast<std::size_t>(t - 1)];
    const int cl = v.cl[static_cast<std::size_t>(t)];
    const int pow = v.pow[static_cast<std::size_t>(t - 1)];
    if (!inst.pos_in_domain(prev_pos) || !inst.pos_in_domain(pos)) continue;
    if (prev_pos != pos) {
      if (pow != 0) flag(Constraint::C3, t);
      const auto& w = inst.edge_weight.at(prev_pos, pos);
      if (!w || cl != prev_cl - *w) flag(Constraint::C5, t);
    } else if (cl != prev_cl + pow) {
      flag(Constraint::C4, t);
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

FeasibilityReport check_global(const Instance& inst, const GlobalSolution& s) {
  if (static_cast<int>(s.trajectories.size()) != inst.num_vehicles)
    throw std::invalid_argument("solution must hold one trajectory per vehicle");

  FeasibilityReport report;
  for (int n = 1; n <= inst.num_vehicles; ++n) {
    auto partial =
        check_partial(inst, n, s.trajectories[static_cast<std::size_t>(n - 1)]);
    report.violations.insert(report.violations.end(), partial.violations.begin(),
                             partial.violations.end());
  }
  for (int t = 1; t <= inst.num_steps; ++t) {
    int sum = 0;
    for (const auto& v : s.trajectories) sum += v.pow[static_cast<std::size_t>(t - 1)];
    if (sum <= inst.pow_lim_neg || sum >= inst.pow_lim_pos)
      report.violations.push_back({Constraint::C7, t, std::nullopt});
  }
  report.feasible = report.violations.empty();
  return report;
}

Instance toy_instance() {
  Instance inst;
  inst.num_vehicles = 4;
  inst.num_steps = 4;
  inst.num_nodes = 4;
  inst.edge_weight = EdgeWeights(4);
  const std::optional<int> x;  // absent road
  const std::optional<int> w[4][4] = {
      {0, 0, 0, 1},
      {0, 0, 0, x},
      {x, 0, 0, 0},
      {1, x, 0, 0},
  };
  for (int from = 1; from <= 4; ++from)
    for (int to = 1; to <= 4; ++to)
      inst.edge_weight.at(from, to) = w[from - 1][to - 1];
  inst.buy_price = {Rational(3), Rational(5), Rational(4), Rational(5)};
  inst.sell_price = {Rational(2), Rational(9, 2), Rational(7, 2), Rational(4)};
  inst.pow_max = 1;
  inst.cl_min = 1;
  inst.cl_max = 5;
  inst.pow_lim_neg = -3;
  inst.pow_lim_pos = 3;
  inst.vehicles = {
      {2, 4, 3, 5},
      {1, 3, 1, 3},
      {2, 3, 1, 4},
      {4, 1, 3, 4},
  };
  return inst;
}

}  // namespace evcrp
