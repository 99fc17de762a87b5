// SPDX-License-Identifier: Apache-2.0
#include "romopt/mor/reduction.hpp"

#include <Eigen/QR>

#include "romopt/errors.hpp"

namespace romopt::mor {

ReducedSystem project(const fe::SecondOrderSystem& sys, const ReducedBasis& basis) {
    if (basis.V.rows() != sys.size())
        throw DimensionMismatchError("project: basis row count differs from system size");
    ReducedSystem r;
    r.M = basis.V.transpose() * (sys.M * basis.V);
    r.C = basis.V.transpose() * (sys.C * basis.V);
    r.K = basis.V.transpose() * (sys.K * basis.V);
    r.f = basis.V.transpose() * sys.f;
    r.g = basis.V.transpose() * sys.g;  // (g V)^T, stored as a vector
    return r;
}

std::vector<ReducedSystem> reproject_samples(
    const std::vector<const fe::SecondOrderSystem*>& systems, const ReducedBasis& global_basis,
    Execution exec) {
    if (systems.empty()) throw ConfigError("reproject_samples: empty system list");
    const int n = static_cast<int>(systems.size());
    std::vector<ReducedSystem> out(n);
    if (exec == Execution::par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) out[i] = project(*systems[i], global_basis);
    } else {
        for (int i = 0; i < n; ++i) out[i] = project(*systems[i], global_basis);
    }
    return out;
}

Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& cols, double rel_tol) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cols);
    const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
    const double dmax = diag.size() ? diag.maxCoeff() : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (diag[i] > rel_tol * dmax) ++rank;
    Eigen::MatrixXd thin = Eigen::MatrixXd::Identity(cols.rows(), rank);
    return qr.householderQ() * thin;
}

}  // namespace romopt::mor
