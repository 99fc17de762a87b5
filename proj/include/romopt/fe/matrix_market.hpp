// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "romopt/fe/second_order_system.hpp"

namespace romopt::fe {

/// Matrix Market coordinate format (real general).
void write_matrix_market(const SparseMat& A, const std::string& path);

/// Matrix Market array format for a dense matrix or vector.
void write_matrix_market(const Eigen::MatrixXd& A, const std::string& path);
void write_matrix_market(const Eigen::VectorXd& v, const std::string& path);

/// Writes M, C, K, f, g as <prefix>_{M,C,K,f,g}.mtx.
void export_system(const SecondOrderSystem& sys, const std::string& prefix);

}  // namespace romopt::fe
