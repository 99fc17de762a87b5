// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "romopt/sampling/adaptive.hpp"

namespace romopt::cli {

/// Everything a run needs, parsed from one JSON document. Unknown keys are
/// rejected so typos fail loudly.
struct ExperimentConfig {
    std::string model;  // "beam" | "kelvin-cell"

    // beam block
    double beam_length = 1.0;
    int beam_elements = 400;

    // kelvin block
    double kelvin_lz = 0.05;
    double kelvin_strut_thickness = 0.001;
    int kelvin_elements_per_strut = 6;

    fe::MaterialSpec material;
    fe::RayleighDamping damping;

    sbr::ParameterBox bounds;          // from the model block's parameter bounds
    mor::IrkaConfig irka;
    double kappa_svd = 0.9995;
    optim::ObjectiveSpec objective;
    sampling::AdaptiveConfig adaptive;  // fully assembled
    std::uint64_t seed = 0;

    sampling::FomBuilder builder() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace romopt::cli
