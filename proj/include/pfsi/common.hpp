#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace pfsi {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a solver stage fails at run time (non-convergence,
/// singular matrices, blow-up). Precondition violations use
/// std::invalid_argument instead.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfsi
