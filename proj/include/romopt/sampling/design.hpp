// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "romopt/sbr/polynomial.hpp"

namespace romopt::sampling {

/// Cartesian grid of equispaced levels per dimension, endpoints included;
/// a single level degenerates to the box center.
std::vector<Eigen::VectorXd> full_factorial(const sbr::ParameterBox& bounds, int levels);

struct DistanceResult {
    Eigen::VectorXd point;
    bool satisfied = true;  // false when the box could not accommodate the threshold
};

/// Move p away from its nearest neighbor until the Euclidean distance reaches
/// the threshold, clipping to the box; when clipping re-violates, the motion
/// continues along the box face. Best effort with a warning flag when the box
/// is too crowded.
DistanceResult enforce_min_distance(const Eigen::VectorXd& p,
                                    const std::vector<Eigen::VectorXd>& existing,
                                    double threshold, const sbr::ParameterBox& bounds);

/// Stop when the relative objective change is below tol for the last two
/// consecutive iteration pairs (needs >= 3 history entries), or at the cap.
bool stopping_check(const std::vector<double>& objective_history, double tol, int iteration,
                    int max_iterations);

}  // namespace romopt::sampling
