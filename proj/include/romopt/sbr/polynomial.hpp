// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "romopt/errors.hpp"

namespace romopt::sbr {

/// Axis-aligned parameter box with a bijective map onto the unit cube.
struct ParameterBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static ParameterBox unit(int d) {
        ParameterBox b;
        b.lo = Eigen::VectorXd::Zero(d);
        b.hi = Eigen::VectorXd::Ones(d);
        return b;
    }

    int dim() const { return static_cast<int>(lo.size()); }

    void validate() const {
        if (lo.size() != hi.size()) throw ConfigError("parameter box: lo/hi size mismatch");
        for (int i = 0; i < dim(); ++i) {
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
                throw ConfigError("parameter box: bounds must be finite with lo < hi");
        }
    }

    Eigen::VectorXd normalize(const Eigen::VectorXd& p) const {
        return (p - lo).cwiseQuotient(hi - lo);
    }
    Eigen::VectorXd denormalize(const Eigen::VectorXd& q) const {
        return lo + q.cwiseProduct(hi - lo);
    }
    bool contains(const Eigen::VectorXd& p, double tol = 1e-12) const {
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo[i] - tol * (hi[i] - lo[i]) || p[i] > hi[i] + tol * (hi[i] - lo[i]))
                return false;
        return true;
    }
};

/// Multivariate monomials of total degree <= degree in d parameters,
/// graded-lexicographic, constant first. n_f = C(degree + d, d).
struct PolynomialBasis {
    int dim = 0;
    int degree = 0;
    std::vector<std::vector<int>> exponents;

    static PolynomialBasis total_degree(int d, int degree);

    int size() const { return static_cast<int>(exponents.size()); }

    /// phi_i(q) for a (normalized) point q.
    Eigen::VectorXd evaluate(const Eigen::VectorXd& q) const;

    /// d phi_i / d q_j for a (normalized) point q.
    Eigen::VectorXd evaluate_derivative(const Eigen::VectorXd& q, int j) const;
};

/// X[k, i] = phi_i(normalize(p_k)).
Eigen::MatrixXd design_matrix(const std::vector<Eigen::VectorXd>& points,
                              const PolynomialBasis& basis, const ParameterBox& box);

/// Binomial coefficient used for basis sizing.
long long binomial(int n, int k);

}  // namespace romopt::sbr
