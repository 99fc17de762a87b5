// SPDX-License-Identifier: Apache-2.0
#include "cli_config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "romopt/fe/kelvin_cell.hpp"
#include "romopt/fe/timoshenko_beam.hpp"

namespace romopt::cli {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& block,
                  const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key))
            throw ConfigError("unknown config key '" + (block.empty() ? key : block + "." + key) +
                              "'");
    }
}

double num(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
    return obj.at(key).get<double>();
}

int integer(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
    return obj.at(key).get<int>();
}

Eigen::Vector2d pair_of(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_array() || obj.at(key).size() != 2)
        throw ConfigError(std::string("config key '") + key + "' must be a [lo, hi] pair");
    return {obj.at(key)[0].get<double>(), obj.at(key)[1].get<double>()};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    require_keys(j, "",
                 {"model", "beam", "kelvin", "material", "damping", "mor", "objective",
                  "adaptive", "optimizer", "seed"});

    ExperimentConfig cfg;
    if (!j.contains("model")) throw ConfigError("missing config key 'model'");
    cfg.model = j.at("model").get<std::string>();
    if (cfg.model != "beam" && cfg.model != "kelvin-cell")
        throw ConfigError("model must be 'beam' or 'kelvin-cell'");

    // model geometry + parameter bounds
    if (cfg.model == "beam") {
        if (!j.contains("beam")) throw ConfigError("missing config block 'beam'");
        const json& b = j.at("beam");
        require_keys(b, "beam", {"length", "elements", "thickness_bounds", "height_bounds"});
        cfg.beam_length = num(b, "length");
        cfg.beam_elements = integer(b, "elements");
        const Eigen::Vector2d tb = pair_of(b, "thickness_bounds");
        const Eigen::Vector2d hb = pair_of(b, "height_bounds");
        cfg.bounds.lo = Eigen::Vector2d(tb[0], hb[0]);
        cfg.bounds.hi = Eigen::Vector2d(tb[1], hb[1]);
    } else {
        if (!j.contains("kelvin")) throw ConfigError("missing config block 'kelvin'");
        const json& b = j.at("kelvin");
        require_keys(b, "kelvin",
                     {"lx_bounds", "ly_bounds", "lz", "strut_thickness", "elements_per_strut"});
        const Eigen::Vector2d xb = pair_of(b, "lx_bounds");
        const Eigen::Vector2d yb = pair_of(b, "ly_bounds");
        cfg.bounds.lo = Eigen::Vector2d(xb[0], yb[0]);
        cfg.bounds.hi = Eigen::Vector2d(xb[1], yb[1]);
        cfg.kelvin_lz = num(b, "lz");
        cfg.kelvin_strut_thickness = num(b, "strut_thickness");
        cfg.kelvin_elements_per_strut = integer(b, "elements_per_strut");
    }
    cfg.bounds.validate();

    {
        if (!j.contains("material")) throw ConfigError("missing config block 'material'");
        const json& m = j.at("material");
        require_keys(m, "material", {"density", "youngs_modulus", "poisson_ratio"});
        cfg.material = fe::MaterialSpec::isotropic(num(m, "density"), num(m, "youngs_modulus"),
                                                   num(m, "poisson_ratio"));
    }
    {
        if (!j.contains("damping")) throw ConfigError("missing config block 'damping'");
        const json& d = j.at("damping");
        require_keys(d, "damping", {"mass_coefficient", "stiffness_coefficient"});
        cfg.damping = {num(d, "mass_coefficient"), num(d, "stiffness_coefficient")};
        cfg.damping.validate();
    }
    {
        if (!j.contains("mor")) throw ConfigError("missing config block 'mor'");
        const json& m = j.at("mor");
        require_keys(m, "mor",
                     {"order", "irka_tolerance", "irka_max_iterations",
                      "initial_frequency_range", "kappa_svd"});
        cfg.irka.order = integer(m, "order");
        cfg.irka.tolerance = num(m, "irka_tolerance");
        cfg.irka.max_iterations = integer(m, "irka_max_iterations");
        const Eigen::Vector2d fr = pair_of(m, "initial_frequency_range");
        cfg.irka.initial_shifts =
            mor::IrkaConfig::linspace_shifts(fr[0], fr[1], cfg.irka.order);
        cfg.irka.validate();
        cfg.kappa_svd = num(m, "kappa_svd");
        if (!(cfg.kappa_svd > 0.0 && cfg.kappa_svd <= 1.0))
            throw ConfigError("mor.kappa_svd must be in (0, 1]");
    }
    {
        if (!j.contains("objective")) throw ConfigError("missing config block 'objective'");
        const json& o = j.at("objective");
        require_keys(o, "objective", {"band_hz", "points", "norm_order", "log_objective"});
        const Eigen::Vector2d band = pair_of(o, "band_hz");
        cfg.objective.f_lo_hz = band[0];
        cfg.objective.f_hi_hz = band[1];
        cfg.objective.points = integer(o, "points");
        cfg.objective.norm_order = num(o, "norm_order");
        cfg.objective.log_objective =
            o.contains("log_objective") ? o.at("log_objective").get<bool>() : true;
        cfg.objective.validate();
    }

    cfg.adaptive.bounds = cfg.bounds;
    cfg.adaptive.irka = cfg.irka;
    cfg.adaptive.objective = cfg.objective;
    cfg.adaptive.kappa_svd = cfg.kappa_svd;
    {
        if (!j.contains("adaptive")) throw ConfigError("missing config block 'adaptive'");
        const json& a = j.at("adaptive");
        require_keys(a, "adaptive",
                     {"initial_levels", "min_distance", "distance_normalized",
                      "improvement_tolerance", "max_outer_iterations", "final_multi_start",
                      "optimizer_starts"});
        cfg.adaptive.initial_levels = integer(a, "initial_levels");
        cfg.adaptive.min_distance = num(a, "min_distance");
        cfg.adaptive.distance_normalized =
            a.contains("distance_normalized") ? a.at("distance_normalized").get<bool>() : false;
        cfg.adaptive.improvement_tolerance = num(a, "improvement_tolerance");
        cfg.adaptive.max_outer_iterations = integer(a, "max_outer_iterations");
        if (a.contains("final_multi_start"))
            cfg.adaptive.final_multi_start = a.at("final_multi_start").get<int>();
        if (a.contains("optimizer_starts"))
            cfg.adaptive.optimizer_starts = a.at("optimizer_starts").get<int>();
    }
    {
        if (!j.contains("optimizer")) throw ConfigError("missing config block 'optimizer'");
        const json& o = j.at("optimizer");
        require_keys(o, "optimizer", {"gradient_tolerance", "max_iterations"});
        cfg.adaptive.optimizer.bounds = cfg.bounds;
        cfg.adaptive.optimizer.gradient_tolerance = num(o, "gradient_tolerance");
        cfg.adaptive.optimizer.max_iterations = integer(o, "max_iterations");
        cfg.adaptive.optimizer.validate();
    }
    cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
    cfg.adaptive.seed = cfg.seed;
    cfg.adaptive.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

sampling::FomBuilder ExperimentConfig::builder() const {
    if (model == "beam") {
        const double length = beam_length;
        const int elements = beam_elements;
        const fe::MaterialSpec mat = material;
        const fe::RayleighDamping damp = damping;
        return [length, elements, mat, damp](const Eigen::VectorXd& p) {
            return fe::assemble_timoshenko_beam({length, p[0], p[1], elements}, mat, damp);
        };
    }
    const double lz = kelvin_lz;
    const double t = kelvin_strut_thickness;
    const int per_strut = kelvin_elements_per_strut;
    const fe::MaterialSpec mat = material;
    const fe::RayleighDamping damp = damping;
    return [lz, t, per_strut, mat, damp](const Eigen::VectorXd& p) {
        return fe::assemble_kelvin_cell({p[0], p[1], lz, t, per_strut}, mat, damp);
    };
}

}  // namespace romopt::cli
