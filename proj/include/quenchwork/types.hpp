#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qwork {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bad user input: config files, CLI flags, inconsistent argument shapes.
// Mapped to exit code 2 by the CLI.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not deliver its contract (failed
// eigendecomposition, degenerate sample, ...). Exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qwork
