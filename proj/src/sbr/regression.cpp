// SPDX-License-Identifier: Apache-2.0
#include "romopt/sbr/regression.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace romopt::sbr {

namespace {

struct ActiveSolve {
    Eigen::VectorXd mean;        // over active columns
    Eigen::MatrixXd covariance;  // active block
    Eigen::VectorXd gamma;       // active block
};

ActiveSolve solve_posterior(const Eigen::MatrixXd& Xa, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& alpha_a, double sigma2) {
    const Eigen::MatrixXd gram = Xa.transpose() * Xa;
    Eigen::MatrixXd A = gram;
    A.diagonal() += sigma2 * alpha_a;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    ActiveSolve s;
    s.mean = ldlt.solve(Xa.transpose() * a);
    s.covariance =
        sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(Xa.cols(), Xa.cols()));
    // symmetrize against round-off
    s.covariance = 0.5 * (s.covariance + s.covariance.transpose()).eval();
    s.gamma = Eigen::VectorXd::Ones(Xa.cols()) -
              alpha_a.cwiseProduct(s.covariance.diagonal());
    return s;
}

}  // namespace

SbrPosterior sbr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& raw_targets,
                     const SbrConfig& config) {
    if (X.rows() < 1) throw ConfigError("sbr_fit: need at least one sample");
    if (X.rows() != raw_targets.size())
        throw DimensionMismatchError("sbr_fit: X/target mismatch");
    if (!X.allFinite() || !raw_targets.allFinite())
        throw ConfigError("sbr_fit: non-finite input");

    const int nf = static_cast<int>(X.cols());
    const int K = static_cast<int>(X.rows());

    // The hyperparameter schedule (initial alpha, prune threshold, noise
    // floor) is calibrated for O(1) targets; reduced-operator entries span
    // many orders of magnitude, so the adaptive mode fits scaled targets and
    // reports the posterior in original units. The frozen (ridge) mode uses
    // the data as given so the closed form holds verbatim.
    const double scale = config.update_hyperparameters
                             ? std::max(raw_targets.cwiseAbs().maxCoeff(), 1e-300)
                             : 1.0;
    const Eigen::VectorXd targets = raw_targets / scale;

    SbrPosterior post;
    post.active.assign(nf, 1);
    post.alpha = Eigen::VectorXd::Constant(nf, config.initial_alpha);

    const double mean_t = targets.mean();
    const double var_t = K > 1 ? (targets.array() - mean_t).square().sum() / (K - 1)
                               : targets[0] * targets[0];
    double sigma2 = std::max(0.1 * var_t, config.noise_floor);

    auto active_indices = [&] {
        std::vector<int> idx;
        for (int i = 0; i < nf; ++i)
            if (post.active[i]) idx.push_back(i);
        return idx;
    };

    std::vector<int> idx = active_indices();
    ActiveSolve solve;
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        post.sweeps = sweep + 1;
        Eigen::MatrixXd Xa(K, idx.size());
        Eigen::VectorXd alpha_a(idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
            Xa.col(c) = X.col(idx[c]);
            alpha_a[c] = post.alpha[idx[c]];
        }
        solve = solve_posterior(Xa, targets, alpha_a, sigma2);

        if (!config.update_hyperparameters) break;

        // hyperparameter re-estimation
        Eigen::VectorXd alpha_new(idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const double b2 = solve.mean[c] * solve.mean[c];
            alpha_new[c] = b2 > 0.0 ? std::max(solve.gamma[c], 0.0) / b2
                                    : 2.0 * config.prune_threshold;
        }
        const Eigen::VectorXd resid = targets - Xa * solve.mean;
        const double denom = std::max(static_cast<double>(K) - solve.gamma.sum(), 1.0);
        sigma2 = std::max(resid.squaredNorm() / denom, config.noise_floor);

        double rel_change = 0.0;
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const double prev = std::max(std::abs(alpha_a[c]), 1e-300);
            rel_change = std::max(rel_change, std::abs(alpha_new[c] - alpha_a[c]) / prev);
        }
        for (std::size_t c = 0; c < idx.size(); ++c) post.alpha[idx[c]] = alpha_new[c];

        // one-way pruning
        std::vector<int> keep;
        for (int i : idx)
            if (post.alpha[i] <= config.prune_threshold) keep.push_back(i);
        if (keep.empty()) {
            // everything pruned: fall back to a constant-only model
            for (int i = 0; i < nf; ++i) post.active[i] = 0;
            post.active[0] = 1;
            post.alpha[0] = config.initial_alpha;
            idx = {0};
            Eigen::MatrixXd Xc = X.col(0);
            solve = solve_posterior(Xc, targets, Eigen::VectorXd::Constant(1, post.alpha[0]),
                                    sigma2);
            break;
        }
        const bool pruned = keep.size() != idx.size();
        if (pruned) {
            for (int i : idx) post.active[i] = 0;
            for (int i : keep) post.active[i] = 1;
            idx = std::move(keep);
        }
        if (!pruned && rel_change < config.convergence_tol) break;
    }

    // final pass with the settled hyperparameters
    {
        Eigen::MatrixXd Xa(K, idx.size());
        Eigen::VectorXd alpha_a(idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
            Xa.col(c) = X.col(idx[c]);
            alpha_a[c] = post.alpha[idx[c]];
        }
        solve = solve_posterior(Xa, targets, alpha_a, sigma2);
    }

    post.mean = Eigen::VectorXd::Zero(nf);
    post.covariance = Eigen::MatrixXd::Zero(nf, nf);
    post.gamma = Eigen::VectorXd::Zero(nf);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        post.mean[idx[c]] = scale * solve.mean[c];
        post.gamma[idx[c]] = solve.gamma[c];
        for (std::size_t d = 0; d < idx.size(); ++d)
            post.covariance(idx[c], idx[d]) = scale * scale * solve.covariance(c, d);
    }
    post.noise_variance = scale * scale * sigma2;
    post.alpha /= scale * scale;  // precisions in original units
    return post;
}

}  // namespace romopt::sbr
