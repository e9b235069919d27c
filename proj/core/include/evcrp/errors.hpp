#pragma once

#include <stdexcept>
#include <string>

namespace evcrp {

// Thrown when an exhaustive operation would exceed its configured budget
// (state-space scans, Cartesian products). Callers map this to exit code 4.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evcrp
