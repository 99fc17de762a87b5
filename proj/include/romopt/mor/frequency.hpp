// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "romopt/fe/second_order_system.hpp"
#include "romopt/parallel.hpp"

namespace romopt::mor {

using Complex = std::complex<double>;

/// Equispaced (or explicit) frequency grid with s_i = 2*pi*i*f_i.
struct FrequencyGrid {
    std::vector<double> frequencies_hz;  // strictly increasing

    static FrequencyGrid equispaced(double f_lo, double f_hi, int count);
    static FrequencyGrid from_hz(std::vector<double> f);

    std::size_t size() const { return frequencies_hz.size(); }
    Complex s(std::size_t i) const { return Complex(0.0, 2.0 * M_PI * frequencies_hz[i]); }
};

/// Dense reduced system, same form as the full one.
struct ReducedSystem {
    Eigen::MatrixXd M;
    Eigen::MatrixXd C;
    Eigen::MatrixXd K;
    Eigen::VectorXd f;
    Eigen::VectorXd g;

    Eigen::Index size() const { return K.rows(); }
};

struct FrequencyResponse {
    Eigen::VectorXcd state;
    Complex output;
};

/// Solve (s^2 M + s C + K) x = f, y = g x. Throws SingularSystemError.
FrequencyResponse solve_frequency_response(const fe::SecondOrderSystem& sys, Complex s);
FrequencyResponse solve_frequency_response(const ReducedSystem& sys, Complex s);

/// |y(s_i)| over the grid. Parallel over frequencies; the serial path is the
/// reference the parallel one must match bit for bit.
std::vector<double> transfer_magnitudes(const fe::SecondOrderSystem& sys,
                                        const FrequencyGrid& grid,
                                        Execution exec = Execution::par);
std::vector<double> transfer_magnitudes(const ReducedSystem& sys, const FrequencyGrid& grid,
                                        Execution exec = Execution::par);

}  // namespace romopt::mor
