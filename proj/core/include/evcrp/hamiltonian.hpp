#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "evcrp/encoding.hpp"
#include "evcrp/errors.hpp"

namespace evcrp {

// Two diagonal penalty constructions are shipped. Verbatim counts the
// literal projector terms of the constraint Hamiltonians: a MOVE step that
// satisfies both the routing and the energy-loss condition is rewarded
// twice (H3 and H5), a charging step once (H4), an idle step not at all,
// so feasible states are not energy-degenerate. Indicator rewards each
// locally feasible transition exactly once, which makes the constraint
// ground level coincide with the feasible set.
enum class PenaltyVariant { Verbatim, Indicator };

struct PenaltyWeights {
  std::array<Rational, 5> lambda{};  // lambda[i] multiplies H_{i+1}
  PenaltyVariant variant = PenaltyVariant::Indicator;

  static PenaltyWeights uniform(const Rational& value,
                                PenaltyVariant variant = PenaltyVariant::Indicator);
  // Throws std::invalid_argument unless every lambda is positive.
  void validate() const;
};

struct EnergyBreakdown {
  Rational cost_term;
  std::array<Rational, 5> constraint_terms{};
  Rational total;
};

// Diagonal cost energy of one trajectory, evaluated through the per-step
// power-eigenvalue sum (j ranging over -(d2-1)/2..(d2-1)/2). Agrees with
// trajectory_cost by construction; the two are kept as independent routes.
Rational cost_energy(const Instance& inst, const VehicleTrajectory& v);

// How many projector terms of each constraint Hamiltonian the trajectory
// satisfies; term i contributes -lambda_i * multiplicity_i to the energy.
// Bounds per entry: (2, 2, T, T, T).
std::array<int, 5> verbatim_multiplicities(const Instance& inst,
                                           const VehicleSpec& spec,
                                           const VehicleTrajectory& v);

// Indicator counts: endpoint-position checks (0..2), charge-boundary checks
// (0..2), locally feasible transitions (0..T). Entries 4 and 5 are always 0.
std::array<int, 5> indicator_multiplicities(const Instance& inst,
                                            const VehicleSpec& spec,
                                            const VehicleTrajectory& v);

std::array<Rational, 5> constraint_energy_verbatim(
    const Instance& inst, const VehicleSpec& spec, const VehicleTrajectory& v,
    const std::array<Rational, 5>& lambda);

std::array<Rational, 5> constraint_energy_indicator(
    const Instance& inst, const VehicleSpec& spec, const VehicleTrajectory& v,
    const std::array<Rational, 5>& lambda);

EnergyBreakdown total_energy(const Instance& inst, const VehicleSpec& spec,
                             const VehicleTrajectory& v,
                             const PenaltyWeights& weights);

struct ScanOptions {
  // Refuse scans over basis spaces larger than this.
  std::uint64_t dimension_budget = 1'000'000'000;
  int threads = 0;  // <= 0: all cores
};

struct GroundState {
  BigInt index;
  EnergyBreakdown energy;
  VehicleTrajectory trajectory;
};

// Exact diagonal argmin of the full per-vehicle Hamiltonian by exhaustive
// enumeration of the basis. Ties break toward the smallest basis index.
// Throws BudgetExceeded when the dimension exceeds the budget.
GroundState ground_state_exhaustive(const Instance& inst, int vehicle_index,
                                    const PenaltyWeights& weights,
                                    const ScanOptions& options = {});

// All basis states minimizing the constraint-only energy (cost term
// excluded), ascending. Under the Indicator variant this is exactly the
// feasible set, which is what makes it useful as an oracle.
std::vector<BigInt> minimum_constraint_energy_states(
    const Instance& inst, int vehicle_index, const PenaltyWeights& weights,
    const ScanOptions& options = {}, std::size_t max_states = 1u << 22);

struct EnergyRow {
  BigInt index;
  EnergyBreakdown energy;
  bool feasible = false;
};

// The `count` lowest-energy basis states, ordered by (total, index).
std::vector<EnergyRow> lowest_energy_states(const Instance& inst,
                                            int vehicle_index,
                                            const PenaltyWeights& weights,
                                            std::size_t count,
                                            const ScanOptions& options = {});

}  // namespace evcrp
