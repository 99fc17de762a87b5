// SPDX-License-Identifier: Apache-2.0
#include "romopt/mor/frequency.hpp"

#include <Eigen/SparseLU>

#include "romopt/errors.hpp"

namespace romopt::mor {

FrequencyGrid FrequencyGrid::equispaced(double f_lo, double f_hi, int count) {
    if (count < 1) throw ConfigError("frequency grid needs at least one point");
    if (count > 1 && !(f_lo < f_hi)) throw ConfigError("frequency band must satisfy f_lo < f_hi");
    FrequencyGrid grid;
    grid.frequencies_hz.resize(count);
    if (count == 1) {
        grid.frequencies_hz[0] = f_lo;
    } else {
        const double step = (f_hi - f_lo) / (count - 1);
        for (int i = 0; i < count; ++i) grid.frequencies_hz[i] = f_lo + step * i;
        grid.frequencies_hz.back() = f_hi;
    }
    return grid;
}

FrequencyGrid FrequencyGrid::from_hz(std::vector<double> f) {
    for (std::size_t i = 1; i < f.size(); ++i)
        if (!(f[i] > f[i - 1])) throw ConfigError("frequencies must be strictly increasing");
    FrequencyGrid grid;
    grid.frequencies_hz = std::move(f);
    return grid;
}

FrequencyResponse solve_frequency_response(const fe::SecondOrderSystem& sys, Complex s) {
    Eigen::SparseMatrix<Complex> Kd =
        (sys.K.cast<Complex>() + s * sys.C.cast<Complex>() + (s * s) * sys.M.cast<Complex>());
    Kd.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(Kd);
    if (lu.info() != Eigen::Success) throw SingularSystemError(s);
    FrequencyResponse r;
    r.state = lu.solve(sys.f.cast<Complex>());
    if (!r.state.allFinite()) throw SingularSystemError(s);
    r.output = sys.g.cast<Complex>().dot(r.state);
    return r;
}

FrequencyResponse solve_frequency_response(const ReducedSystem& sys, Complex s) {
    Eigen::MatrixXcd Kd = sys.K.cast<Complex>() + s * sys.C.cast<Complex>() +
                          (s * s) * sys.M.cast<Complex>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Kd);
    if (!lu.isInvertible()) throw SingularSystemError(s);
    FrequencyResponse r;
    r.state = lu.solve(sys.f.cast<Complex>());
    if (!r.state.allFinite()) throw SingularSystemError(s);
    r.output = sys.g.cast<Complex>().dot(r.state);
    return r;
}

namespace {

template <typename Sys>
std::vector<double> transfer_magnitudes_impl(const Sys& sys, const FrequencyGrid& grid,
                                             Execution exec) {
    const int n = static_cast<int>(grid.size());
    std::vector<double> mags(n);
    if (exec == Execution::par) {
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            try {
                mags[i] = std::abs(solve_frequency_response(sys, grid.s(i)).output);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int i = 0; i < n; ++i)
            mags[i] = std::abs(solve_frequency_response(sys, grid.s(i)).output);
    }
    return mags;
}

}  // namespace

std::vector<double> transfer_magnitudes(const fe::SecondOrderSystem& sys,
                                        const FrequencyGrid& grid, Execution exec) {
    return transfer_magnitudes_impl(sys, grid, exec);
}

std::vector<double> transfer_magnitudes(const ReducedSystem& sys, const FrequencyGrid& grid,
                                        Execution exec) {
    return transfer_magnitudes_impl(sys, grid, exec);
}

}  // namespace romopt::mor
