// SPDX-License-Identifier: Apache-2.0
#include "romopt/optim/bfgs.hpp"

#include <cmath>

#include "romopt/rng.hpp"

namespace romopt::optim {

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& p, const sbr::ParameterBox& box) {
    return p.cwiseMax(box.lo).cwiseMin(box.hi);
}

/// Infinity norm of p - P(p - g): the standard box-constrained stationarity
/// measure (gradient components pointing into active bounds are clamped).
double projected_gradient_norm(const Eigen::VectorXd& p, const Eigen::VectorXd& g,
                               const sbr::ParameterBox& box) {
    return (p - clip(p - g, box)).cwiseAbs().maxCoeff();
}

}  // namespace

OptimizeResult minimize_box(const ObjectiveFn& objective, const GradientFn& gradient,
                            const Eigen::VectorXd& start, const OptimizerConfig& config) {
    config.validate();
    const sbr::ParameterBox& box = config.bounds;
    const int d = box.dim();

    OptimizeResult res;
    Eigen::VectorXd p = clip(start, box);
    double fp = objective(p);
    ++res.objective_evaluations;
    Eigen::VectorXd gp = gradient(p);
    ++res.gradient_evaluations;
    res.trace.push_back(fp);

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd I = H;

    for (int it = 0; it < config.max_iterations; ++it) {
        res.iterations = it + 1;
        if (projected_gradient_norm(p, gp, box) < config.gradient_tolerance) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd dir = -(H * gp);
        if (dir.dot(gp) >= 0.0) dir = -gp;  // enforce descent

        double alpha = 1.0;
        Eigen::VectorXd pt;
        double ft = fp;
        bool accepted = false;
        for (int ls = 0; ls < config.max_line_search_steps; ++ls) {
            pt = clip(p + alpha * dir, box);
            if ((pt - p).cwiseAbs().maxCoeff() == 0.0) break;
            ft = objective(pt);
            ++res.objective_evaluations;
            if (ft <= fp + config.armijo_c1 * gp.dot(pt - p)) {
                accepted = true;
                break;
            }
            alpha *= config.backtrack_factor;
        }
        if (!accepted) break;

        Eigen::VectorXd gt = gradient(pt);
        ++res.gradient_evaluations;
        const Eigen::VectorXd sv = pt - p;
        const Eigen::VectorXd yv = gt - gp;
        const double sy = sv.dot(yv);
        if (sy > 1e-12 * sv.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            H = (I - rho * sv * yv.transpose()) * H * (I - rho * yv * sv.transpose()) +
                rho * sv * sv.transpose();
        }
        p = pt;
        fp = ft;
        gp = gt;
        res.trace.push_back(fp);
    }

    res.p = p;
    res.value = fp;
    return res;
}

namespace {

OptimizeResult optimize_impl(const sbr::SurrogateDraw& draw, const ObjectiveSpec& spec,
                             const OptimizerConfig& config, std::uint64_t seed, bool use_fd,
                             Execution exec) {
    config.validate();
    const sbr::ParameterBox& box = config.bounds;
    const int d = box.dim();

    int extra_evals = 0;  // FD objective evaluations folded into the count

    ObjectiveFn objective = [&](const Eigen::VectorXd& p) {
        return evaluate_objective(sbr::evaluate_draw(draw, p), spec, exec).value;
    };
    GradientFn gradient;
    if (use_fd) {
        gradient = [&, d](const Eigen::VectorXd& p) {
            Eigen::VectorXd step = 1e-6 * (box.hi - box.lo);
            // keep the stencil inside the box
            Eigen::VectorXd pc = p;
            for (int j = 0; j < d; ++j)
                pc[j] = std::min(std::max(pc[j], box.lo[j] + step[j]), box.hi[j] - step[j]);
            extra_evals += 2 * d;
            return finite_difference_gradient(objective, pc, step);
        };
    } else {
        gradient = [&](const Eigen::VectorXd& p) {
            return adjoint_gradient(draw, p, spec, exec).gradient;
        };
    }

    Rng rng(derive_seed(seed, 0xB0F5ull));
    Eigen::VectorXd start(d);
    for (int j = 0; j < d; ++j) start[j] = rng.uniform(box.lo[j], box.hi[j]);

    for (int attempt = 0;; ++attempt) {
        try {
            OptimizeResult res = minimize_box(objective, gradient, start, config);
            res.objective_evaluations += extra_evals;
            return res;
        } catch (const SingularSystemError&) {
            if (attempt >= 1) throw;
            for (int j = 0; j < d; ++j) start[j] = rng.uniform(box.lo[j], box.hi[j]);
        } catch (const NondifferentiablePointError&) {
            if (attempt >= 1) throw;
            for (int j = 0; j < d; ++j) start[j] = rng.uniform(box.lo[j], box.hi[j]);
        }
    }
}

}  // namespace

OptimizeResult optimize(const sbr::SurrogateDraw& draw, const ObjectiveSpec& spec,
                        const OptimizerConfig& config, std::uint64_t seed, Execution exec) {
    return optimize_impl(draw, spec, config, seed, false, exec);
}

OptimizeResult optimize_fd(const sbr::SurrogateDraw& draw, const ObjectiveSpec& spec,
                           const OptimizerConfig& config, std::uint64_t seed, Execution exec) {
    return optimize_impl(draw, spec, config, seed, true, exec);
}

}  // namespace romopt::optim
