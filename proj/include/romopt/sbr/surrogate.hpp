// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "romopt/mor/irka.hpp"
#include "romopt/parallel.hpp"
#include "romopt/sbr/regression.hpp"

namespace romopt::sbr {

/// One sampled parameter point with its local reduction and the operators
/// reprojected in the current global basis.
struct ReducedSample {
    Eigen::VectorXd point;
    mor::ReducedBasis local_basis;
    Eigen::MatrixXd snapshots;  // unit-normalized solve columns for the global SVD
    mor::ReducedSystem rom;     // reprojected in the shared global basis
};

struct SurrogateConfig {
    int max_degree = 4;  // cap of the adaptive total degree
    SbrConfig sbr;
};

/// Per-entry posteriors for the upper triangles of K_r, C_r, M_r over a shared
/// polynomial basis in normalized parameters; f_r, g_r are constants.
struct OperatorSurrogate {
    PolynomialBasis basis;
    ParameterBox box;
    int order = 0;  // r_G
    // entry (i, j), i <= j, row-major over the upper triangle
    std::vector<SbrPosterior> k_entries;
    std::vector<SbrPosterior> c_entries;
    std::vector<SbrPosterior> m_entries;
    Eigen::VectorXd f_r;
    Eigen::VectorXd g_r;

    int triangle_size() const { return order * (order + 1) / 2; }
    static int triangle_index(int i, int j, int n);  // i <= j
};

/// One Thompson realization: deterministic coefficients per entry.
struct SurrogateDraw {
    PolynomialBasis basis;
    ParameterBox box;
    int order = 0;
    Eigen::MatrixXd k_coeffs;  // triangle_size x n_f
    Eigen::MatrixXd c_coeffs;
    Eigen::MatrixXd m_coeffs;
    Eigen::VectorXd f_r;
    Eigen::VectorXd g_r;
    std::uint64_t seed = 0;
};

/// Largest total degree with C(degree + d, d) <= sample count, capped.
int adaptive_degree(int sample_count, int dim, int cap);

/// One sbr_fit per upper-triangle entry of each reduced operator. Entry fits
/// run in parallel; results are independent of scheduling.
OperatorSurrogate fit_operator_surrogate(const std::vector<ReducedSample>& samples,
                                         const ParameterBox& box,
                                         const SurrogateConfig& config = {},
                                         Execution exec = Execution::par);

/// beta ~ N(beta_mu, Sigma) per entry via a symmetric factorization of the
/// active covariance block; deterministic in (surrogate, seed) and independent
/// of scheduling (counter-based per-entry streams). Sigma = 0 reproduces the
/// mean exactly.
SurrogateDraw thompson_draw(const OperatorSurrogate& surrogate, std::uint64_t seed,
                            Execution exec = Execution::par);

/// The posterior-mean model as a deterministic draw.
SurrogateDraw mean_draw(const OperatorSurrogate& surrogate);

/// Reconstruct symmetric reduced operators at a parameter point.
mor::ReducedSystem evaluate_draw(const SurrogateDraw& draw, const Eigen::VectorXd& p);

/// Exact term-by-term derivative polynomials, chain-ruled through the
/// normalization map.
struct DrawDerivatives {
    const SurrogateDraw* draw = nullptr;

    /// dK_r/dp_j, dC_r/dp_j, dM_r/dp_j at p.
    struct Matrices {
        Eigen::MatrixXd dK, dC, dM;
    };
    Matrices evaluate(const Eigen::VectorXd& p, int j) const;
};

DrawDerivatives differentiate_draw(const SurrogateDraw& draw);

/// JSON (de)serialization for warm restart.
std::string surrogate_to_json(const OperatorSurrogate& surrogate);
OperatorSurrogate surrogate_from_json(const std::string& json_text);

}  // namespace romopt::sbr
