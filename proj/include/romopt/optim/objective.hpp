// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "romopt/mor/frequency.hpp"

namespace romopt::optim {

using mor::Complex;

/// Band objective R = (sum_i |y(s_i)|^k)^(1/k) over n_s equispaced points.
struct ObjectiveSpec {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
    int points = 1;          // n_s
    double norm_order = 1.0; // k >= 1
    bool log_objective = true;

    void validate() const {
        if (points < 1) throw ConfigError("objective needs at least one frequency point");
        if (points > 1 && !(f_lo_hz < f_hi_hz))
            throw ConfigError("objective band must satisfy f_lo < f_hi");
        if (!(norm_order >= 1.0)) throw ConfigError("norm order k must be >= 1");
    }

    mor::FrequencyGrid grid() const {
        return mor::FrequencyGrid::equispaced(f_lo_hz, f_hi_hz, points);
    }
};

/// Per-frequency states and outputs of one band solve (Appendix-style total
/// system, stored block-wise: the subproblems stay separate).
struct TotalSolve {
    std::vector<Complex> s;           // complex frequencies
    std::vector<Eigen::VectorXcd> x;  // states per frequency
    std::vector<Complex> y;           // outputs per frequency
    double value = 0.0;               // R or ln R
    double raw_norm = 0.0;            // R
};

/// Evaluate the objective on a reduced system. Returns ln R when
/// spec.log_objective is set. Throws SingularSystemError.
TotalSolve evaluate_objective(const mor::ReducedSystem& sys, const ObjectiveSpec& spec,
                              Execution exec = Execution::par);

/// Full-order variant (used for the stopping history and the grid oracles).
TotalSolve evaluate_objective(const fe::SecondOrderSystem& sys, const ObjectiveSpec& spec,
                              Execution exec = Execution::par);

/// Wirtinger-calculus adjoint right-hand sides: per frequency the coefficient
/// w_i = (sum_j |y_j|^k)^(1/k-1) * |y_i|^(k-1) * (1/2) conj(y_i)/|y_i| that
/// scales the g-row embedding; the gradient assembly applies the 2*Re[.] rule
/// of the final differential. Throws NondifferentiablePointError when some
/// |y_i| = 0.
std::vector<Complex> objective_output_weights(const std::vector<Complex>& y, double k);

}  // namespace romopt::optim
