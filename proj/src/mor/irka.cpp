// SPDX-License-Identifier: Apache-2.0
#include "romopt/mor/irka.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "romopt/errors.hpp"

namespace romopt::mor {

std::vector<Complex> IrkaConfig::linspace_shifts(double lo, double hi, int r) {
    std::vector<Complex> s(r);
    if (r == 1) {
        s[0] = Complex(0.5 * (lo + hi), 0.0);
        return s;
    }
    const double step = (hi - lo) / (r - 1);
    for (int i = 0; i < r; ++i) s[i] = Complex(lo + step * i, 0.0);
    return s;
}

void IrkaConfig::validate() const {
    if (order < 1) throw ConfigError("IRKA order must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("IRKA tolerance must be positive");
    if (initial_shifts.empty()) throw ConfigError("IRKA needs initial expansion frequencies");
    // closed under complex conjugation
    for (const Complex& s : initial_shifts) {
        if (std::abs(s.imag()) < 1e-14) continue;
        const bool has_conj = std::any_of(initial_shifts.begin(), initial_shifts.end(),
                                          [&](const Complex& t) {
                                              return std::abs(t.real() - s.real()) < 1e-12 &&
                                                     std::abs(t.imag() + s.imag()) < 1e-12;
                                          });
        if (!has_conj)
            throw ConfigError("initial expansion frequencies must be closed under conjugation");
    }
}

Eigen::VectorXcd quadratic_eigenvalues(const ReducedSystem& sys) {
    const Eigen::Index r = sys.size();
    const Eigen::MatrixXd Minv_K = sys.M.lu().solve(sys.K);
    const Eigen::MatrixXd Minv_C = sys.M.lu().solve(sys.C);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * r, 2 * r);
    A.topRightCorner(r, r).setIdentity();
    A.bottomLeftCorner(r, r) = -Minv_K;
    A.bottomRightCorner(r, r) = -Minv_C;
    return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
}

namespace {

void sort_shifts(std::vector<Complex>& s) {
    std::sort(s.begin(), s.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

/// One representative per conjugate pair (imag >= 0), real shifts as-is.
std::vector<Complex> conjugate_representatives(const std::vector<Complex>& shifts) {
    std::vector<Complex> reps;
    for (const Complex& s : shifts) {
        const Complex r = s.imag() < 0.0 ? std::conj(s) : s;
        const bool seen = std::any_of(reps.begin(), reps.end(), [&](const Complex& t) {
            return std::abs(t.real() - r.real()) <= 1e-12 * (1.0 + std::abs(r.real())) &&
                   std::abs(t.imag() - r.imag()) <= 1e-12 * (1.0 + std::abs(r.imag()));
        });
        if (!seen) reps.push_back(r);
    }
    return reps;
}

/// Mirror images of the r eigenvalues closest to the imaginary axis.
/// Ties on |Re| break toward smaller |Im|; conjugate pairs stay together
/// (a pair straddling the cut displaces the next candidate).
std::vector<Complex> select_new_shifts(const Eigen::VectorXcd& eigenvalues, int r) {
    std::vector<Complex> lam(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::sort(lam.begin(), lam.end(), [](const Complex& a, const Complex& b) {
        const double ra = std::abs(a.real()), rb = std::abs(b.real());
        if (ra != rb) return ra < rb;
        const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
        if (ia != ib) return ia < ib;
        return a.imag() > b.imag();
    });
    std::vector<Complex> picked;
    std::vector<char> used(lam.size(), 0);
    for (std::size_t i = 0; i < lam.size() && static_cast<int>(picked.size()) < r; ++i) {
        if (used[i]) continue;
        used[i] = 1;
        picked.push_back(lam[i]);
        if (std::abs(lam[i].imag()) > 1e-12 * (1.0 + std::abs(lam[i]))) {
            // pull in the conjugate partner even if it crosses the cut
            for (std::size_t j = i + 1; j < lam.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(lam[j].real() - lam[i].real()) <=
                        1e-9 * (1.0 + std::abs(lam[i].real())) &&
                    std::abs(lam[j].imag() + lam[i].imag()) <=
                        1e-9 * (1.0 + std::abs(lam[i].imag()))) {
                    used[j] = 1;
                    picked.push_back(lam[j]);
                    break;
                }
            }
        }
    }
    if (static_cast<int>(picked.size()) > r) picked.resize(r);
    for (Complex& s : picked) s = -s;  // mirror images
    sort_shifts(picked);
    return picked;
}

struct SolveSet {
    Eigen::MatrixXd basis;      // orthonormal
    Eigen::MatrixXd snapshots;  // unit-normalized Re/Im columns
};

SolveSet solve_basis(const fe::SecondOrderSystem& sys, const std::vector<Complex>& shifts,
                     double perturb, Execution exec) {
    const std::vector<Complex> reps = conjugate_representatives(shifts);
    const int m = static_cast<int>(reps.size());
    std::vector<Eigen::VectorXcd> sols(m);
    std::exception_ptr err;

    auto solve_one = [&](int i) {
        Complex s = reps[i];
        try {
            sols[i] = solve_frequency_response(sys, s).state;
        } catch (const SingularSystemError&) {
            // perturb the expansion point once, then give up
            s += Complex(perturb, perturb);
            sols[i] = solve_frequency_response(sys, s).state;
        }
    };

    if (exec == Execution::par) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < m; ++i) {
            try {
                solve_one(i);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int i = 0; i < m; ++i) solve_one(i);
    }

    Eigen::Index cols = 0;
    for (int i = 0; i < m; ++i) cols += std::abs(reps[i].imag()) < 1e-14 ? 1 : 2;
    Eigen::MatrixXd raw(sys.size(), cols);
    Eigen::Index c = 0;
    for (int i = 0; i < m; ++i) {
        raw.col(c++) = sols[i].real();
        if (std::abs(reps[i].imag()) >= 1e-14) raw.col(c++) = sols[i].imag();
    }
    SolveSet out;
    out.snapshots = raw;
    for (Eigen::Index j = 0; j < out.snapshots.cols(); ++j) {
        const double nrm = out.snapshots.col(j).norm();
        if (nrm > 0.0) out.snapshots.col(j) /= nrm;
    }
    out.basis = orthonormalize_columns(raw);
    return out;
}

}  // namespace

IrkaResult irka_second_order(const fe::SecondOrderSystem& sys, const IrkaConfig& config,
                             Execution exec) {
    config.validate();
    const int r = config.order;

    std::vector<Complex> shifts = config.initial_shifts;
    sort_shifts(shifts);

    IrkaResult result;
    for (int it = 0; it < config.max_iterations; ++it) {
        SolveSet set = solve_basis(sys, shifts, config.tolerance, exec);
        result.basis.V = std::move(set.basis);
        result.snapshots = std::move(set.snapshots);
        result.shifts = shifts;
        result.iterations = it + 1;

        const ReducedSystem rom = project(sys, result.basis);
        std::vector<Complex> next = select_new_shifts(quadratic_eigenvalues(rom), r);

        if (next.size() == shifts.size()) {
            double delta = 0.0;
            for (std::size_t i = 0; i < next.size(); ++i)
                delta = std::max(delta, std::abs(next[i] - shifts[i]));
            if (delta < config.tolerance) {
                result.converged = true;
                return result;
            }
        }
        shifts = std::move(next);
    }
    return result;
}

}  // namespace romopt::mor
