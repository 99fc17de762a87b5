// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "cli_config.hpp"

namespace romopt::cli {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;             // 0: hardware default
    bool seed_override = false;
    std::uint64_t seed = 0;
    int error_map_levels = 5;    // 0 disables the error-map artifact
};

int cmd_run_adaptive(const CommonOptions& opts);
int cmd_run_ffd_baseline(const CommonOptions& opts, int levels);
int cmd_run_fd_opt(const CommonOptions& opts, const std::string& level);
int cmd_gradient_check(const CommonOptions& opts, int trials, bool flip_sign);

}  // namespace romopt::cli
