// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "romopt/mor/frequency.hpp"

namespace romopt::mor {

/// Orthonormal reduced basis (n x r).
struct ReducedBasis {
    Eigen::MatrixXd V;

    Eigen::Index order() const { return V.cols(); }
};

/// Galerkin projection M_r = V^T M V, ..., f_r = V^T f, g_r = g V.
ReducedSystem project(const fe::SecondOrderSystem& sys, const ReducedBasis& basis);

/// Shared-basis reprojection of many systems.
std::vector<ReducedSystem> reproject_samples(const std::vector<const fe::SecondOrderSystem*>& systems,
                                             const ReducedBasis& global_basis,
                                             Execution exec = Execution::par);

/// Orthonormalize columns by column-pivoted QR, dropping columns whose pivot
/// falls below rel_tol times the largest.
Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& cols, double rel_tol = 1e-12);

}  // namespace romopt::mor
