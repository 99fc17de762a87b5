// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "romopt/mor/reduction.hpp"

namespace romopt::mor {

struct IrkaConfig {
    int order = 6;                       // r
    double tolerance = 1e-6;             // rad/s, on sorted expansion points
    int max_iterations = 10;             // N
    std::vector<Complex> initial_shifts;  // closed under complex conjugation

    /// r real shifts equispaced on [lo, hi] (trivially closed under conjugation).
    static std::vector<Complex> linspace_shifts(double lo, double hi, int r);

    void validate() const;
};

struct IrkaResult {
    ReducedBasis basis;                 // orthonormal, from the last solve set
    Eigen::MatrixXd snapshots;          // unit-normalized Re/Im solution columns
    std::vector<Complex> shifts;        // expansion points the basis was built from
    int iterations = 0;
    bool converged = false;
};

/// Second-order IRKA: iterate shifted solves -> real basis -> projection ->
/// quadratic eigenvalues via companion linearization -> mirror the r
/// eigenvalues closest to the imaginary axis. Shifted solves within one
/// iteration run in parallel; the result is independent of that scheduling.
IrkaResult irka_second_order(const fe::SecondOrderSystem& sys, const IrkaConfig& config,
                             Execution exec = Execution::par);

/// Eigenvalues of the reduced quadratic pencil (s^2 M + s C + K) via the
/// first-order companion linearization [[0, I], [-M^-1 K, -M^-1 C]].
Eigen::VectorXcd quadratic_eigenvalues(const ReducedSystem& sys);

}  // namespace romopt::mor
