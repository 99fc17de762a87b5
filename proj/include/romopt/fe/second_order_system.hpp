// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "romopt/fe/material.hpp"

namespace romopt::fe {

using SparseMat = Eigen::SparseMatrix<double>;

/// Second-order system s^2 M x + s C x + K x = f u, y = g x with real sparse
/// symmetric operators (after boundary-condition elimination).
struct SecondOrderSystem {
    SparseMat M;
    SparseMat C;
    SparseMat K;
    Eigen::VectorXd f;  // input
    Eigen::VectorXd g;  // output row, stored as a vector

    Eigen::Index size() const { return K.rows(); }
};

/// C = a*M + b*K. Throws on dimension mismatch.
SparseMat rayleigh_damping(const SparseMat& M, const SparseMat& K, const RayleighDamping& damping);

}  // namespace romopt::fe
