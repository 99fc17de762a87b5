// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "romopt/optim/adjoint.hpp"
#include "romopt/sbr/polynomial.hpp"

namespace romopt::optim {

struct OptimizerConfig {
    sbr::ParameterBox bounds;
    double gradient_tolerance = 1e-8;  // on the projected gradient
    int max_iterations = 200;
    double armijo_c1 = 1e-4;
    double backtrack_factor = 0.5;
    int max_line_search_steps = 40;

    void validate() const {
        bounds.validate();
        if (!(gradient_tolerance > 0.0)) throw ConfigError("gradient tolerance must be > 0");
        if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    }
};

struct OptimizeResult {
    Eigen::VectorXd p;
    double value = 0.0;
    int iterations = 0;
    int objective_evaluations = 0;
    int gradient_evaluations = 0;
    bool converged = false;
    std::vector<double> trace;  // accepted objective values
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Projected BFGS with Armijo backtracking from an explicit start point.
OptimizeResult minimize_box(const ObjectiveFn& objective, const GradientFn& gradient,
                            const Eigen::VectorXd& start, const OptimizerConfig& config);

/// Box-constrained descent on a Thompson draw from a uniform-random start;
/// gradients come from the adjoint path (no extra objective evaluations).
/// Retries one resampled start if the first objective evaluation fails.
OptimizeResult optimize(const sbr::SurrogateDraw& draw, const ObjectiveSpec& spec,
                        const OptimizerConfig& config, std::uint64_t seed,
                        Execution exec = Execution::par);

/// Same landscape, but gradients via central finite differences of the
/// objective (baseline; adds 2d objective evaluations per gradient).
OptimizeResult optimize_fd(const sbr::SurrogateDraw& draw, const ObjectiveSpec& spec,
                           const OptimizerConfig& config, std::uint64_t seed,
                           Execution exec = Execution::par);

}  // namespace romopt::optim
