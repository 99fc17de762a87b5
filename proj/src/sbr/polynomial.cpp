// SPDX-License-Identifier: Apache-2.0
#include "romopt/sbr/polynomial.hpp"

#include <functional>

namespace romopt::sbr {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

PolynomialBasis PolynomialBasis::total_degree(int d, int degree) {
    if (d < 1) throw ConfigError("polynomial basis needs dim >= 1");
    if (degree < 0) throw ConfigError("polynomial degree must be >= 0");
    PolynomialBasis b;
    b.dim = d;
    b.degree = degree;
    std::vector<int> expo(d, 0);
    // graded order: total degree 0, 1, ..., degree
    for (int total = 0; total <= degree; ++total) {
        std::fill(expo.begin(), expo.end(), 0);
        std::function<void(int, int)> rec = [&](int pos, int remaining) {
            if (pos == d - 1) {
                expo[pos] = remaining;
                b.exponents.push_back(expo);
                return;
            }
            for (int e = remaining; e >= 0; --e) {
                expo[pos] = e;
                rec(pos + 1, remaining - e);
            }
        };
        rec(0, total);
    }
    return b;
}

Eigen::VectorXd PolynomialBasis::evaluate(const Eigen::VectorXd& q) const {
    Eigen::VectorXd phi(size());
    for (int i = 0; i < size(); ++i) {
        double v = 1.0;
        for (int j = 0; j < dim; ++j)
            for (int e = 0; e < exponents[i][j]; ++e) v *= q[j];
        phi[i] = v;
    }
    return phi;
}

Eigen::VectorXd PolynomialBasis::evaluate_derivative(const Eigen::VectorXd& q, int j) const {
    Eigen::VectorXd dphi(size());
    for (int i = 0; i < size(); ++i) {
        const int ej = exponents[i][j];
        if (ej == 0) {
            dphi[i] = 0.0;
            continue;
        }
        double v = static_cast<double>(ej);
        for (int k = 0; k < dim; ++k) {
            const int e = exponents[i][k] - (k == j ? 1 : 0);
            for (int t = 0; t < e; ++t) v *= q[k];
        }
        dphi[i] = v;
    }
    return dphi;
}

Eigen::MatrixXd design_matrix(const std::vector<Eigen::VectorXd>& points,
                              const PolynomialBasis& basis, const ParameterBox& box) {
    if (points.empty()) throw ConfigError("design_matrix: need at least one point");
    box.validate();
    Eigen::MatrixXd X(points.size(), basis.size());
    for (std::size_t k = 0; k < points.size(); ++k)
        X.row(k) = basis.evaluate(box.normalize(points[k])).transpose();
    return X;
}

}  // namespace romopt::sbr
