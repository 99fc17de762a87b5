// SPDX-License-Identifier: Apache-2.0
#include "romopt/mor/global_basis.hpp"

#include <Eigen/SVD>

#include "romopt/errors.hpp"

namespace romopt::mor {

GlobalBasisResult global_basis(const std::vector<Eigen::MatrixXd>& column_blocks, double kappa) {
    if (column_blocks.empty()) throw ConfigError("global_basis: empty basis list");

    Eigen::Index rows = column_blocks.front().rows();
    Eigen::Index cols = 0;
    for (const auto& b : column_blocks) {
        if (b.rows() != rows) throw DimensionMismatchError("global_basis: row counts differ");
        cols += b.cols();
    }
    Eigen::MatrixXd all(rows, cols);
    Eigen::Index at = 0;
    for (const auto& b : column_blocks) {
        all.middleCols(at, b.cols()) = b;
        at += b.cols();
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(all, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();

    int r_g = 0;
    if (kappa >= 1.0) {
        const double tol = 1e-12 * (sv.size() ? sv[0] : 0.0);
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            if (sv[j] > tol) ++r_g;
    } else {
        const double total = sv.sum();
        double cum = 0.0;
        for (Eigen::Index j = 0; j < sv.size(); ++j) {
            cum += sv[j];
            if (cum / total > kappa) {
                r_g = static_cast<int>(j) + 1;
                break;
            }
        }
        if (r_g == 0) r_g = static_cast<int>(sv.size());
    }

    GlobalBasisResult out;
    out.basis.V = svd.matrixU().leftCols(r_g);
    out.order = r_g;
    out.singular_values = sv;
    return out;
}

}  // namespace romopt::mor
