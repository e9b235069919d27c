#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "evcrp/model.hpp"

namespace evcrp {

// Exact big integers for basis indices and state-space sizes; global sizes
// overflow 64 bits long before instances stop being interesting.
using BigInt = boost::multiprecision::cpp_int;

enum class VarKind { ChargeLevel, Power, Position };

struct QuditDescriptor {
  VarKind kind = VarKind::ChargeLevel;
  int time_step = 0;  // 0..T
  int radix = 1;

  bool operator==(const QuditDescriptor&) const = default;
};

// Mixed-radix bijection between one vehicle's trajectories and the basis
// indices of its composite-qudit space. Digit order is fixed: cl_0, pos_0,
// then (cl_t, pow_t, pos_t) for t = 1..T, most significant first. Charge
// digits are stored as cl - cl_min, power as pow + pow_max, position as
// pos - 1.
class QuditLayout {
 public:
  static QuditLayout for_vehicle(const Instance& inst);

  const std::vector<QuditDescriptor>& qudits() const { return qudits_; }
  const BigInt& total_dimension() const { return total_dimension_; }
  int num_steps() const { return num_steps_; }

  // Throws std::invalid_argument on malformed sizes or out-of-domain values.
  BigInt encode(const VehicleTrajectory& v) const;
  // Throws std::out_of_range when index is not in [0, total_dimension).
  VehicleTrajectory decode(BigInt index) const;

 private:
  std::vector<QuditDescriptor> qudits_;  // most significant first
  BigInt total_dimension_ = 1;
  int num_steps_ = 0;
  int cl_min_ = 0;
  int pow_max_ = 0;
};

// include_initial=false: size of the global space of free variables,
// (d1*d2*d3)^(N*T). include_initial=true: one vehicle's basis size with
// the t=0 qudits included, (d1*d3)*(d1*d2*d3)^T. Pure arithmetic on the
// instance's dimensions.
BigInt search_space_size(const Instance& inst, bool include_initial);

}  // namespace evcrp
