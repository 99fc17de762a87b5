// SPDX-License-Identifier: Apache-2.0
#include "cli_commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "romopt/mor/global_basis.hpp"
#include "romopt/rng.hpp"

namespace romopt::cli {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

ExperimentConfig load_with_overrides(const CommonOptions& opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.seed_override) {
        cfg.seed = opts.seed;
        cfg.adaptive.seed = opts.seed;
    }
    set_worker_count(opts.workers);
    fs::create_directories(opts.out_dir);
    return cfg;
}

std::string iterations_csv(const sampling::RunResult& result) {
    std::string csv =
        "iteration,found_p1,found_p2,draw_objective,accepted_p1,accepted_p2,"
        "fom_objective,samples_total,global_order,surrogate_degree,"
        "objective_evaluations,gradient_evaluations,distance_adjusted\n";
    std::size_t samples = result.sample_points.size() - result.iterations.size();
    for (const auto& it : result.iterations) {
        ++samples;
        csv += std::to_string(it.iteration) + "," + fmt(it.found_optimum[0]) + "," +
               fmt(it.found_optimum[1]) + "," + fmt(it.draw_objective) + "," +
               fmt(it.accepted_point[0]) + "," + fmt(it.accepted_point[1]) + "," +
               fmt(it.fom_objective) + "," + std::to_string(samples) + "," +
               std::to_string(it.global_order) + "," + std::to_string(it.surrogate_degree) +
               "," + std::to_string(it.objective_evaluations) + "," +
               std::to_string(it.gradient_evaluations) + "," +
               (it.distance_adjusted ? "1" : "0") + "\n";
    }
    return csv;
}

std::string timings_csv(const sampling::RunResult& result) {
    std::string csv =
        "iteration,local_reduction_s,reprojection_s,model_training_s,optimization_s,"
        "sample_adding_s\n";
    csv += "initial_sampling," + fmt(result.t_initial_sampling) + ",0,0,0,0\n";
    for (const auto& it : result.iterations) {
        csv += std::to_string(it.iteration) + "," + fmt(it.t_reduction) + "," +
               fmt(it.t_reprojection) + "," + fmt(it.t_training) + "," +
               fmt(it.t_optimization) + "," + fmt(it.t_sample_adding) + "\n";
    }
    return csv;
}

/// Error map of the posterior-mean pROM against the FOM on a uniform grid.
std::string error_map_csv(const ExperimentConfig& cfg,
                          const std::vector<sbr::ReducedSample>& samples, int levels) {
    auto surrogate = sbr::fit_operator_surrogate(samples, cfg.bounds);
    const std::vector<Eigen::VectorXd> grid = sampling::full_factorial(cfg.bounds, levels);
    const std::vector<double> errors =
        sampling::prom_error_map(surrogate, cfg.builder(), grid, cfg.objective);
    std::string csv = "p1,p2,mean_relative_error\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv += fmt(grid[i][0]) + "," + fmt(grid[i][1]) + "," + fmt(errors[i]) + "\n";
    return csv;
}

json result_json(const ExperimentConfig& cfg, const sampling::RunResult& result) {
    json j = json::parse(sampling::run_result_to_json(result));
    j["model"] = cfg.model;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

int cmd_run_adaptive(const CommonOptions& opts) {
    const ExperimentConfig cfg = load_with_overrides(opts);
    const sampling::RunResult result = sampling::run_adaptive(cfg.builder(), cfg.adaptive);

    const fs::path out(opts.out_dir);
    write_text(out / "result.json", result_json(cfg, result).dump(2) + "\n");
    write_text(out / "iterations.csv", iterations_csv(result));
    write_text(out / "timings.csv", timings_csv(result));
    if (opts.error_map_levels > 0)
        write_text(out / "error_map.csv",
                   error_map_csv(cfg, result.samples, opts.error_map_levels));

    std::printf("final p* = [%s, %s], objective = %s, samples = %zu, r_G = %d\n",
                fmt(result.final_point[0]).c_str(), fmt(result.final_point[1]).c_str(),
                fmt(result.final_objective).c_str(), result.sample_points.size(),
                result.final_global_order);
    return 0;
}

int cmd_run_ffd_baseline(const CommonOptions& opts, int levels) {
    if (levels < 2) throw ConfigError("baseline needs --levels >= 2");
    const ExperimentConfig cfg = load_with_overrides(opts);
    const auto builder = cfg.builder();

    const auto t0 = Clock::now();
    const std::vector<Eigen::VectorXd> pts = sampling::full_factorial(cfg.bounds, levels);
    std::vector<fe::SecondOrderSystem> foms(pts.size());
    std::vector<mor::IrkaResult> reductions(pts.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        try {
            foms[i] = builder(pts[i]);
            reductions[i] = mor::irka_second_order(foms[i], cfg.irka, Execution::seq);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    const double t_sampling = std::chrono::duration<double>(Clock::now() - t0).count();

    std::vector<Eigen::MatrixXd> blocks;
    for (const auto& r : reductions) blocks.push_back(r.snapshots);
    const auto global = mor::global_basis(blocks, cfg.kappa_svd);
    std::vector<const fe::SecondOrderSystem*> ptrs;
    for (const auto& f : foms) ptrs.push_back(&f);
    const auto roms = mor::reproject_samples(ptrs, global.basis);

    std::vector<sbr::ReducedSample> samples(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        samples[i].point = pts[i];
        samples[i].local_basis = reductions[i].basis;
        samples[i].snapshots = reductions[i].snapshots;
        samples[i].rom = roms[i];
    }
    const auto surrogate = sbr::fit_operator_surrogate(samples, cfg.bounds);
    const auto mean = sbr::mean_draw(surrogate);

    optim::OptimizeResult best;
    bool have = false;
    for (int st = 0; st < std::max(1, cfg.adaptive.final_multi_start); ++st) {
        auto r = optim::optimize(mean, cfg.objective, cfg.adaptive.optimizer,
                                 derive_seed(cfg.seed, 0xFFDull, st));
        if (!have || r.value < best.value) {
            best = std::move(r);
            have = true;
        }
    }
    const double fom_value =
        optim::evaluate_objective(builder(best.p), cfg.objective).value;
    const double t_total = std::chrono::duration<double>(Clock::now() - t0).count();

    const fs::path out(opts.out_dir);
    json j;
    j["model"] = cfg.model;
    j["seed"] = cfg.seed;
    j["levels"] = levels;
    j["initial_samples"] = pts.size();
    j["global_order"] = global.order;
    j["surrogate_degree"] = surrogate.basis.degree;
    j["optimum"] = {best.p[0], best.p[1]};
    j["rom_objective"] = best.value;
    j["fom_objective"] = fom_value;
    j["objective_evaluations"] = best.objective_evaluations;
    j["gradient_evaluations"] = best.gradient_evaluations;
    write_text(out / "result.json", j.dump(2) + "\n");

    std::string csv =
        "iteration,found_p1,found_p2,rom_objective,fom_objective,samples_total,global_order,"
        "surrogate_degree\n";
    csv += "1," + fmt(best.p[0]) + "," + fmt(best.p[1]) + "," + fmt(best.value) + "," +
           fmt(fom_value) + "," + std::to_string(pts.size()) + "," +
           std::to_string(global.order) + "," + std::to_string(surrogate.basis.degree) + "\n";
    write_text(out / "iterations.csv", csv);

    std::string timings = "phase,seconds\n";
    timings += "initial_sampling," + fmt(t_sampling) + "\n";
    timings += "total," + fmt(t_total) + "\n";
    write_text(out / "timings.csv", timings);

    if (opts.error_map_levels > 0)
        write_text(out / "error_map.csv", error_map_csv(cfg, samples, opts.error_map_levels));

    std::printf("FFD %d^2 baseline: p* = [%s, %s], fom objective = %s, r_G = %d\n", levels,
                fmt(best.p[0]).c_str(), fmt(best.p[1]).c_str(), fmt(fom_value).c_str(),
                global.order);
    return 0;
}

int cmd_run_fd_opt(const CommonOptions& opts, const std::string& level) {
    if (level != "fom" && level != "rom")
        throw ConfigError("--level must be 'fom' or 'rom'");
    const ExperimentConfig cfg = load_with_overrides(opts);
    const auto builder = cfg.builder();

    int evals = 0;
    double t_reduction = 0.0;
    optim::ObjectiveFn objective;
    if (level == "fom") {
        objective = [&](const Eigen::VectorXd& p) {
            ++evals;
            return optim::evaluate_objective(builder(p), cfg.objective).value;
        };
    } else {
        objective = [&](const Eigen::VectorXd& p) {
            ++evals;
            const auto fom = builder(p);
            const auto t0 = Clock::now();
            const auto irka = mor::irka_second_order(fom, cfg.irka);
            t_reduction += std::chrono::duration<double>(Clock::now() - t0).count();
            const auto rom = mor::project(fom, irka.basis);
            return optim::evaluate_objective(rom, cfg.objective).value;
        };
    }
    const Eigen::VectorXd step = 1e-6 * (cfg.bounds.hi - cfg.bounds.lo);
    optim::GradientFn gradient = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd pc = p;
        for (int j = 0; j < cfg.bounds.dim(); ++j)
            pc[j] = std::min(std::max(pc[j], cfg.bounds.lo[j] + step[j]),
                             cfg.bounds.hi[j] - step[j]);
        return optim::finite_difference_gradient(objective, pc, step);
    };

    Rng rng(derive_seed(cfg.seed, 0xFD07ull));
    Eigen::VectorXd start(cfg.bounds.dim());
    for (int jdim = 0; jdim < cfg.bounds.dim(); ++jdim)
        start[jdim] = rng.uniform(cfg.bounds.lo[jdim], cfg.bounds.hi[jdim]);

    const auto t0 = Clock::now();
    const auto res = optim::minimize_box(objective, gradient, start, cfg.adaptive.optimizer);
    const double t_total = std::chrono::duration<double>(Clock::now() - t0).count();

    const fs::path out(opts.out_dir);
    json j;
    j["model"] = cfg.model;
    j["seed"] = cfg.seed;
    j["level"] = level;
    j["optimum"] = {res.p[0], res.p[1]};
    j["objective"] = res.value;
    j["iterations"] = res.iterations;
    j["objective_evaluations"] = evals;
    j["gradient_evaluations"] = res.gradient_evaluations;
    j["converged"] = res.converged;
    write_text(out / "result.json", j.dump(2) + "\n");

    std::string timings = "phase,seconds\n";
    timings += "total," + fmt(t_total) + "\n";
    if (level == "rom") timings += "reduction," + fmt(t_reduction) + "\n";
    write_text(out / "timings.csv", timings);

    std::printf("FD %s optimization: p* = [%s, %s], objective = %s, %d objective evals\n",
                level.c_str(), fmt(res.p[0]).c_str(), fmt(res.p[1]).c_str(),
                fmt(res.value).c_str(), evals);
    return 0;
}

int cmd_gradient_check(const CommonOptions& opts, int trials, bool flip_sign) {
    if (trials < 1) throw ConfigError("--trials must be >= 1");
    const ExperimentConfig cfg = load_with_overrides(opts);
    const auto builder = cfg.builder();

    // surrogate from the configured initial design
    const std::vector<Eigen::VectorXd> pts =
        sampling::full_factorial(cfg.bounds, std::max(2, cfg.adaptive.initial_levels));
    std::vector<sbr::ReducedSample> samples(pts.size());
    std::vector<fe::SecondOrderSystem> foms(pts.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        try {
            foms[i] = builder(pts[i]);
            const auto irka = mor::irka_second_order(foms[i], cfg.irka, Execution::seq);
            samples[i].point = pts[i];
            samples[i].local_basis = irka.basis;
            samples[i].snapshots = irka.snapshots;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    std::vector<Eigen::MatrixXd> blocks;
    for (auto& s : samples) blocks.push_back(s.snapshots);
    const auto global = mor::global_basis(blocks, cfg.kappa_svd);
    std::vector<const fe::SecondOrderSystem*> ptrs;
    for (auto& f : foms) ptrs.push_back(&f);
    const auto roms = mor::reproject_samples(ptrs, global.basis);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].rom = roms[i];
    const auto surrogate = sbr::fit_operator_surrogate(samples, cfg.bounds);

    std::vector<double> errors;
    Rng rng(derive_seed(cfg.seed, 0x9CADull));
    for (int t = 0; t < trials; ++t) {
        const auto draw = sbr::thompson_draw(surrogate, derive_seed(cfg.seed, 0xD7A3ull, t));
        Eigen::VectorXd p(cfg.bounds.dim());
        for (int jdim = 0; jdim < cfg.bounds.dim(); ++jdim)
            p[jdim] = cfg.bounds.lo[jdim] +
                      (0.1 + 0.8 * rng.uniform()) * (cfg.bounds.hi[jdim] - cfg.bounds.lo[jdim]);
        auto adj = optim::adjoint_gradient(draw, p, cfg.objective);
        if (flip_sign) adj.gradient = -adj.gradient;
        auto objective = [&](const Eigen::VectorXd& q) {
            return optim::evaluate_objective(sbr::evaluate_draw(draw, q), cfg.objective).value;
        };
        const Eigen::VectorXd step = 1e-6 * (cfg.bounds.hi - cfg.bounds.lo);
        const Eigen::VectorXd fd = optim::finite_difference_gradient(objective, p, step);
        errors.push_back((adj.gradient - fd).norm() / std::max(fd.norm(), 1e-300));
    }
    std::sort(errors.begin(), errors.end());
    const double max_err = errors.back();
    const double median = errors[errors.size() / 2];

    const fs::path out(opts.out_dir);
    json j;
    j["model"] = cfg.model;
    j["seed"] = cfg.seed;
    j["trials"] = trials;
    j["max_relative_error"] = max_err;
    j["median_relative_error"] = median;
    j["tolerance"] = 1e-5;
    j["pass"] = max_err <= 1e-5;
    write_text(out / "gradient_check.json", j.dump(2) + "\n");

    std::printf("gradient check: %d trials, max rel err = %s, median = %s -> %s\n", trials,
                fmt(max_err).c_str(), fmt(median).c_str(), max_err <= 1e-5 ? "pass" : "FAIL");
    return max_err <= 1e-5 ? 0 : 3;
}

}  // namespace romopt::cli
