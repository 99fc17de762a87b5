// SPDX-License-Identifier: Apache-2.0
#include "romopt/optim/objective.hpp"

#include <cmath>

namespace romopt::optim {

namespace {

template <typename Sys>
TotalSolve evaluate_impl(const Sys& sys, const ObjectiveSpec& spec, Execution exec) {
    spec.validate();
    const mor::FrequencyGrid grid = spec.grid();
    const int n = static_cast<int>(grid.size());

    TotalSolve solve;
    solve.s.resize(n);
    solve.x.resize(n);
    solve.y.resize(n);
    for (int i = 0; i < n; ++i) solve.s[i] = grid.s(i);

    std::exception_ptr err;
    auto one = [&](int i) {
        const mor::FrequencyResponse r = mor::solve_frequency_response(sys, solve.s[i]);
        solve.x[i] = r.state;
        solve.y[i] = r.output;
    };
    if (exec == Execution::par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            try {
                one(i);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int i = 0; i < n; ++i) one(i);
    }

    const double k = spec.norm_order;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::pow(std::abs(solve.y[i]), k);
    solve.raw_norm = std::pow(sum, 1.0 / k);
    solve.value = spec.log_objective ? std::log(solve.raw_norm) : solve.raw_norm;
    return solve;
}

}  // namespace

TotalSolve evaluate_objective(const mor::ReducedSystem& sys, const ObjectiveSpec& spec,
                              Execution exec) {
    return evaluate_impl(sys, spec, exec);
}

TotalSolve evaluate_objective(const fe::SecondOrderSystem& sys, const ObjectiveSpec& spec,
                              Execution exec) {
    return evaluate_impl(sys, spec, exec);
}

std::vector<Complex> objective_output_weights(const std::vector<Complex>& y, double k) {
    const int n = static_cast<int>(y.size());
    double sum = 0.0;
    for (const Complex& yi : y) {
        const double a = std::abs(yi);
        if (a <= 0.0)
            throw NondifferentiablePointError("objective gradient undefined at |y| = 0");
        sum += std::pow(a, k);
    }
    const double outer = std::pow(sum, 1.0 / k - 1.0);
    std::vector<Complex> w(n);
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(y[i]);
        w[i] = outer * std::pow(a, k - 1.0) * 0.5 * std::conj(y[i]) / a;
    }
    return w;
}

}  // namespace romopt::optim
