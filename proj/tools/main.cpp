// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdio>

#include "cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adaptive sampling and optimization of parametric reduced-order models"};
    app.require_subcommand(1);

    romopt::cli::CommonOptions opts;
    int levels = 10;
    int trials = 10;
    bool flip_sign = false;
    std::string fd_level = "fom";

    auto add_common = [&](CLI::App* cmd, bool with_error_map) {
        cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
        auto* seed_opt = cmd->add_option("--seed", opts.seed, "override the config seed");
        cmd->callback([&opts, seed_opt] { opts.seed_override = seed_opt->count() > 0; });
        if (with_error_map)
            cmd->add_option("--error-map-levels", opts.error_map_levels,
                            "grid levels for error_map.csv (0 disables)");
    };

    auto* adaptive = app.add_subcommand("run-adaptive", "adaptive sampling run");
    add_common(adaptive, true);

    auto* baseline = app.add_subcommand("run-ffd-baseline", "non-adaptive full-factorial pROM");
    add_common(baseline, true);
    baseline->add_option("--levels", levels, "full-factorial levels per dimension");

    auto* fdopt = app.add_subcommand("run-fd-opt", "finite-difference optimization baseline");
    add_common(fdopt, false);
    fdopt->add_option("--level", fd_level, "fom | rom");

    auto* gcheck = app.add_subcommand("gradient-check", "adjoint-vs-FD gradient verification");
    add_common(gcheck, false);
    gcheck->add_option("--trials", trials, "number of (draw, point) trials");
    gcheck->add_flag("--flip-gradient-sign", flip_sign)->group("");  // test hook, hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (adaptive->parsed()) return romopt::cli::cmd_run_adaptive(opts);
        if (baseline->parsed()) return romopt::cli::cmd_run_ffd_baseline(opts, levels);
        if (fdopt->parsed()) return romopt::cli::cmd_run_fd_opt(opts, fd_level);
        if (gcheck->parsed()) return romopt::cli::cmd_gradient_check(opts, trials, flip_sign);
    } catch (const romopt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
