// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "romopt/optim/objective.hpp"
#include "romopt/sbr/surrogate.hpp"

namespace romopt::optim {

struct GradientResult {
    double value = 0.0;        // R or ln R at p
    Eigen::VectorXd gradient;  // dR/dp or d lnR/dp
};

/// Analytic adjoint gradient of the band objective on a surrogate draw:
/// per frequency, solve the state, solve the transposed system for the
/// adjoint, and accumulate Re(eta^T (-dKtilde/dp_j x)) in frequency order.
/// One factorization per frequency serves both solves.
GradientResult adjoint_gradient(const sbr::SurrogateDraw& draw, const Eigen::VectorXd& p,
                                const ObjectiveSpec& spec, Execution exec = Execution::par);

/// Central finite differences of a scalar objective; 2d evaluations.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& objective, const Eigen::VectorXd& p,
    const Eigen::VectorXd& step);

}  // namespace romopt::optim
