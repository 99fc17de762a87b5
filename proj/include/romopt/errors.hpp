// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace romopt {

struct InvalidGeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dynamic stiffness matrix was singular at a given complex frequency.
struct SingularSystemError : std::runtime_error {
    std::complex<double> frequency;
    explicit SingularSystemError(std::complex<double> s)
        : std::runtime_error("singular dynamic stiffness at s = (" + std::to_string(s.real()) +
                             ", " + std::to_string(s.imag()) + "i)"),
          frequency(s) {}
};

/// |y| = 0 at some frequency point; the L_k objective is not differentiable there.
struct NondifferentiablePointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptimizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace romopt
