// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "romopt/mor/reduction.hpp"

namespace romopt::mor {

struct GlobalBasisResult {
    ReducedBasis basis;          // first r_G left singular vectors
    int order = 0;               // r_G
    Eigen::VectorXd singular_values;
};

/// SVD of the column-concatenation of the given blocks (local bases or
/// solution snapshot blocks). Truncation keeps the smallest r_G with
/// cumsum(sigma)_{r_G} / cumsum(sigma)_end > kappa; kappa >= 1 keeps the
/// numerical rank.
GlobalBasisResult global_basis(const std::vector<Eigen::MatrixXd>& column_blocks, double kappa);

}  // namespace romopt::mor
