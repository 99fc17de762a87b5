// SPDX-License-Identifier: Apache-2.0
#include "romopt/sampling/adaptive.hpp"

#include <chrono>
#include <nlohmann/json.hpp>

#include "romopt/mor/global_basis.hpp"
#include "romopt/rng.hpp"

namespace romopt::sampling {

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Sample {
    Eigen::VectorXd point;
    fe::SecondOrderSystem fom;
    mor::IrkaResult reduction;
};

Sample build_sample(const FomBuilder& builder, const mor::IrkaConfig& irka_config,
                    const Eigen::VectorXd& p, Execution inner_exec) {
    Sample s;
    s.point = p;
    s.fom = builder(p);
    s.reduction = mor::irka_second_order(s.fom, irka_config, inner_exec);
    return s;
}

}  // namespace

void AdaptiveConfig::validate() const {
    bounds.validate();
    if (initial_levels < 1) throw ConfigError("initial_levels must be >= 1");
    if (!(min_distance > 0.0)) throw ConfigError("min_distance must be positive");
    if (!(kappa_svd > 0.0 && kappa_svd <= 1.0)) throw ConfigError("kappa_svd must be in (0, 1]");
    if (max_outer_iterations < 1) throw ConfigError("max_outer_iterations must be >= 1");
    irka.validate();
    objective.validate();
    optimizer.validate();
}

RunResult run_adaptive(const FomBuilder& builder, const AdaptiveConfig& config, Execution exec) {
    config.validate();
    const sbr::ParameterBox& box = config.bounds;

    RunResult result;
    std::vector<Sample> samples;

    // Initial full-factorial design; FOM builds and local reductions in
    // parallel across points (the shifted solves inside stay serial then).
    {
        const auto t0 = Clock::now();
        const std::vector<Eigen::VectorXd> pts = full_factorial(box, config.initial_levels);
        samples.resize(pts.size());
        const Execution inner = exec == Execution::par ? Execution::seq : exec;
        std::exception_ptr err;
        if (exec == Execution::par) {
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
                try {
                    samples[i] = build_sample(builder, config.irka, pts[i], inner);
                } catch (...) {
#pragma omp critical
                    if (!err) err = std::current_exception();
                }
            }
            if (err) std::rethrow_exception(err);
        } else {
            for (std::size_t i = 0; i < pts.size(); ++i)
                samples[i] = build_sample(builder, config.irka, pts[i], exec);
        }
        result.t_initial_sampling = seconds_since(t0);
    }

    std::vector<double> fom_history;
    sbr::OperatorSurrogate surrogate;
    mor::GlobalBasisResult global;

    auto rebuild_surrogate = [&](IterationRecord* rec) {
        // global basis from the snapshot blocks
        auto t0 = Clock::now();
        std::vector<Eigen::MatrixXd> blocks;
        blocks.reserve(samples.size());
        for (const auto& s : samples) blocks.push_back(s.reduction.snapshots);
        global = mor::global_basis(blocks, config.kappa_svd);
        if (rec) rec->global_order = global.order;

        // reprojection
        auto t1 = Clock::now();
        std::vector<const fe::SecondOrderSystem*> foms;
        foms.reserve(samples.size());
        for (const auto& s : samples) foms.push_back(&s.fom);
        std::vector<mor::ReducedSystem> roms = mor::reproject_samples(foms, global.basis, exec);

        std::vector<sbr::ReducedSample> reduced(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            reduced[i].point = samples[i].point;
            reduced[i].local_basis = samples[i].reduction.basis;
            reduced[i].snapshots = samples[i].reduction.snapshots;
            reduced[i].rom = std::move(roms[i]);
        }

        // SBR training
        auto t2 = Clock::now();
        sbr::SurrogateConfig sur_config;
        surrogate = sbr::fit_operator_surrogate(reduced, box, sur_config, exec);
        if (rec) {
            rec->t_reprojection = std::chrono::duration<double>(t2 - t1).count();
            rec->t_reduction += std::chrono::duration<double>(t1 - t0).count();
            rec->t_training = seconds_since(t2);
            rec->surrogate_degree = surrogate.basis.degree;
        }
        result.samples = std::move(reduced);
    };

    for (int outer = 1; outer <= config.max_outer_iterations; ++outer) {
        IterationRecord rec;
        rec.iteration = outer;

        rebuild_surrogate(&rec);

        // Thompson draw + ROM-level optimization
        const auto t_opt = Clock::now();
        const std::uint64_t iter_seed = derive_seed(config.seed, 0x7D5ull, outer);
        const sbr::SurrogateDraw draw = sbr::thompson_draw(surrogate, iter_seed, exec);
        optim::OptimizerConfig opt_config = config.optimizer;
        opt_config.bounds = box;
        optim::OptimizeResult best;
        for (int st = 0; st < std::max(1, config.optimizer_starts); ++st) {
            optim::OptimizeResult r =
                optim::optimize(draw, config.objective, opt_config,
                                derive_seed(iter_seed, st), exec);
            if (st == 0 || r.value < best.value) {
                r.objective_evaluations += st == 0 ? 0 : best.objective_evaluations;
                r.gradient_evaluations += st == 0 ? 0 : best.gradient_evaluations;
                best = std::move(r);
            } else {
                best.objective_evaluations += r.objective_evaluations;
                best.gradient_evaluations += r.gradient_evaluations;
            }
        }
        rec.t_optimization = seconds_since(t_opt);
        rec.found_optimum = best.p;
        rec.draw_objective = best.value;
        rec.objective_evaluations = best.objective_evaluations;
        rec.gradient_evaluations = best.gradient_evaluations;

        // distance guard + sample extension
        const auto t_add = Clock::now();
        std::vector<Eigen::VectorXd> existing;
        existing.reserve(samples.size());
        for (const auto& s : samples) existing.push_back(s.point);

        DistanceResult adjusted;
        if (config.distance_normalized) {
            std::vector<Eigen::VectorXd> existing_n;
            existing_n.reserve(existing.size());
            for (const auto& q : existing) existing_n.push_back(box.normalize(q));
            DistanceResult rn = enforce_min_distance(box.normalize(best.p), existing_n,
                                                     config.min_distance,
                                                     sbr::ParameterBox::unit(box.dim()));
            adjusted.point = box.denormalize(rn.point);
            adjusted.satisfied = rn.satisfied;
        } else {
            adjusted = enforce_min_distance(best.p, existing, config.min_distance, box);
        }
        rec.accepted_point = adjusted.point;
        rec.distance_adjusted = (adjusted.point - best.p).norm() > 0.0;

        Sample fresh;
        try {
            fresh = build_sample(builder, config.irka, adjusted.point, exec);
        } catch (const std::exception&) {
            // retry once at the distance-adjusted point nudged toward the center
            const Eigen::VectorXd retry_p =
                adjusted.point + 0.01 * (0.5 * (box.lo + box.hi) - adjusted.point);
            fresh = build_sample(builder, config.irka, retry_p, exec);
            rec.accepted_point = retry_p;
        }
        // FOM objective at the accepted point for the stopping history
        rec.fom_objective =
            optim::evaluate_objective(fresh.fom, config.objective, exec).value;
        fom_history.push_back(rec.fom_objective);
        samples.push_back(std::move(fresh));
        rec.t_sample_adding = seconds_since(t_add);

        result.iterations.push_back(rec);

        if (stopping_check(fom_history, config.improvement_tolerance, outer,
                           config.max_outer_iterations)) {
            result.stopped_by_improvement = outer < config.max_outer_iterations;
            break;
        }
    }

    // Closing step: refit on the full sample set and optimize the posterior
    // mean from several deterministic starts; report the best FOM-verified
    // point among the accepted samples and that mean optimum.
    rebuild_surrogate(nullptr);
    result.final_global_order = global.order;

    const sbr::SurrogateDraw mean = sbr::mean_draw(surrogate);
    optim::OptimizerConfig opt_config = config.optimizer;
    opt_config.bounds = box;
    bool have_mean_opt = false;
    optim::OptimizeResult mean_best;
    for (int st = 0; st < std::max(1, config.final_multi_start); ++st) {
        try {
            optim::OptimizeResult r = optim::optimize(
                mean, config.objective, opt_config, derive_seed(config.seed, 0xF17ull, st), exec);
            if (!have_mean_opt || r.value < mean_best.value) {
                mean_best = std::move(r);
                have_mean_opt = true;
            }
        } catch (const std::exception&) {
            // a failed start is skipped; the accepted samples still provide a result
        }
    }

    Eigen::VectorXd best_p;
    double best_val = std::numeric_limits<double>::infinity();
    for (const auto& rec : result.iterations) {
        if (rec.fom_objective < best_val) {
            best_val = rec.fom_objective;
            best_p = rec.accepted_point;
        }
    }
    if (have_mean_opt) {
        const double fom_at_mean_opt =
            optim::evaluate_objective(builder(mean_best.p), config.objective, exec).value;
        if (fom_at_mean_opt < best_val) {
            best_val = fom_at_mean_opt;
            best_p = mean_best.p;
        }
    }
    result.final_point = best_p;
    result.final_objective = best_val;

    result.sample_points.clear();
    for (const auto& s : samples) result.sample_points.push_back(s.point);
    return result;
}

std::vector<double> prom_error_map(const sbr::OperatorSurrogate& surrogate,
                                   const FomBuilder& builder,
                                   const std::vector<Eigen::VectorXd>& eval_points,
                                   const optim::ObjectiveSpec& spec, Execution exec) {
    const sbr::SurrogateDraw mean = sbr::mean_draw(surrogate);
    const mor::FrequencyGrid grid = spec.grid();
    const int np = static_cast<int>(eval_points.size());
    std::vector<double> errors(np);

    std::exception_ptr err;
    auto one = [&](int i) {
        const fe::SecondOrderSystem fom = builder(eval_points[i]);
        const std::vector<double> y_fom = mor::transfer_magnitudes(fom, grid, Execution::seq);
        const mor::ReducedSystem rom = sbr::evaluate_draw(mean, eval_points[i]);
        const std::vector<double> y_rom = mor::transfer_magnitudes(rom, grid, Execution::seq);
        double acc = 0.0;
        for (std::size_t q = 0; q < y_fom.size(); ++q)
            acc += std::abs(y_rom[q] - y_fom[q]) / std::max(y_fom[q], 1e-300);
        errors[i] = acc / static_cast<double>(y_fom.size());
    };
    if (exec == Execution::par) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < np; ++i) {
            try {
                one(i);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int i = 0; i < np; ++i) one(i);
    }
    return errors;
}

std::string run_result_to_json(const RunResult& result) {
    using nlohmann::json;
    json j;
    auto vec = [](const Eigen::VectorXd& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
        return a;
    };
    j["final_point"] = vec(result.final_point);
    j["final_objective"] = result.final_objective;
    j["final_global_order"] = result.final_global_order;
    j["stopped_by_improvement"] = result.stopped_by_improvement;
    j["sample_count"] = result.sample_points.size();
    j["samples"] = json::array();
    for (const auto& p : result.sample_points) j["samples"].push_back(vec(p));
    j["iterations"] = json::array();
    for (const auto& r : result.iterations) {
        json it;
        it["iteration"] = r.iteration;
        it["found_optimum"] = vec(r.found_optimum);
        it["draw_objective"] = r.draw_objective;
        it["accepted_point"] = vec(r.accepted_point);
        it["fom_objective"] = r.fom_objective;
        it["global_order"] = r.global_order;
        it["surrogate_degree"] = r.surrogate_degree;
        it["objective_evaluations"] = r.objective_evaluations;
        it["gradient_evaluations"] = r.gradient_evaluations;
        it["distance_adjusted"] = r.distance_adjusted;
        j["iterations"].push_back(std::move(it));
    }
    return j.dump(2);
}

}  // namespace romopt::sampling
