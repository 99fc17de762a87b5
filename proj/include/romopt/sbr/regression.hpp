// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "romopt/sbr/polynomial.hpp"

namespace romopt::sbr {

struct SbrConfig {
    double initial_alpha = 1e-6;
    double prune_threshold = 1e9;   // alpha_i above this drops basis function i
    double convergence_tol = 1e-4;  // max relative alpha change
    int max_sweeps = 200;
    double noise_floor = 1e-12;
    bool update_hyperparameters = true;  // false freezes alpha and sigma^2 (ridge mode)
};

/// Per-entry regression posterior.
struct SbrPosterior {
    Eigen::VectorXd mean;          // beta_mu, zeros at pruned coefficients
    Eigen::MatrixXd covariance;    // full n_f x n_f, zero outside the active block
    Eigen::VectorXd alpha;         // per-coefficient precisions
    Eigen::VectorXd gamma;         // quality factors, zero at pruned coefficients
    double noise_variance = 0.0;   // sigma^2
    std::vector<char> active;      // mask
    int sweeps = 0;

    int active_count() const {
        int n = 0;
        for (char a : active) n += a != 0;
        return n;
    }
};

/// Sparse Bayesian regression with per-coefficient precisions, one-way pruning
/// and relevance-vector noise re-estimation.
SbrPosterior sbr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& targets,
                     const SbrConfig& config = {});

}  // namespace romopt::sbr
