#include "evcrp/encoding.hpp"

#include <stdexcept>

namespace evcrp {

QuditLayout QuditLayout::for_vehicle(const Instance& inst) {
  QuditLayout layout;
  layout.num_steps_ = inst.num_steps;
  layout.cl_min_ = inst.cl_min;
  layout.pow_max_ = inst.pow_max;

  const int d1 = inst.charge_levels();
  const int d2 = inst.power_levels();
  const int d3 = inst.position_levels();
  if (d1 < 1 || d2 < 1 || d3 < 1 || inst.num_steps < 1)
    throw std::invalid_argument("instance dimensions must be positive");

  layout.qudits_.push_back({VarKind::ChargeLevel, 0, d1});
  layout.qudits_.push_back({VarKind::Position, 0, d3});
  for (int t = 1; t <= inst.num_steps; ++t) {
    layout.qudits_.push_back({VarKind::ChargeLevel, t, d1});
    layout.qudits_.push_back({VarKind::Power, t, d2});
    layout.qudits_.push_back({VarKind::Position, t, d3});
  }
  for (const auto& q : layout.qudits_) layout.total_dimension_ *= q.radix;
  return layout;
}

BigInt QuditLayout::encode(const VehicleTrajectory& v) const {
  const auto steps = static_cast<std::size_t>(num_steps_);
  if (v.cl.size() != steps + 1 || v.pos.size() != steps + 1 || v.pow.size() != steps)
    throw std::invalid_argument("trajectory arrays do not match layout");

  BigInt index = 0;
  for (const auto& q : qudits_) {
    const auto t = static_cast<std::size_t>(q.time_step);
    int digit = 0;
    switch (q.kind) {
      case VarKind::ChargeLevel: digit = v.cl[t] - cl_min_; break;
      case VarKind::Power: digit = v.pow[t - 1] + pow_max_; break;
      case VarKind::Position: digit = v.pos[t] - 1; break;
    }
    if (digit < 0 || digit >= q.radix)
      throw std::invalid_argument("trajectory value outside qudit radix");
    index = index * q.radix + digit;
  }
  return index;
}

VehicleTrajectory QuditLayout::decode(BigInt index) const {
  if (index < 0 || index >= total_dimension_)
    throw std::out_of_range("basis index outside layout dimension");

  VehicleTrajectory v;
  v.cl.resize(static_cast<std::size_t>(num_steps_) + 1);
  v.pos.resize(static_cast<std::size_t>(num_steps_) + 1);
  v.pow.resize(static_cast<std::size_t>(num_steps_));
  for (auto it = qudits_.rbegin(); it != qudits_.rend(); ++it) {
    const auto digit = static_cast<int>(index % it->radix);
    index /= it->radix;
    const auto t = static_cast<std::size_t>(it->time_step);
    switch (it->kind) {
      case VarKind::ChargeLevel: v.cl[t] = digit + cl_min_; break;
      case VarKind::Power: v.pow[t - 1] = digit - pow_max_; break;
      case VarKind::Position: v.pos[t] = digit + 1; break;
    }
  }
  return v;
}

BigInt search_space_size(const Instance& inst, bool include_initial) {
  const BigInt step_dim = BigInt(inst.charge_levels()) * inst.power_levels() *
                          inst.position_levels();
  if (include_initial) {
    BigInt size = BigInt(inst.charge_levels()) * inst.position_levels();
    for (int t = 0; t < inst.num_steps; ++t) size *= step_dim;
    return size;
  }
  BigInt size = 1;
  for (int i = 0; i < inst.num_vehicles * inst.num_steps; ++i) size *= step_dim;
  return size;
}

}  // namespace evcrp
