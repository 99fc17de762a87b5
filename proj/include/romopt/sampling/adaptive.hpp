// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "romopt/optim/bfgs.hpp"
#include "romopt/sampling/design.hpp"

namespace romopt::sampling {

using FomBuilder = std::function<fe::SecondOrderSystem(const Eigen::VectorXd&)>;

struct AdaptiveConfig {
    sbr::ParameterBox bounds;
    int initial_levels = 2;            // full-factorial levels per dimension
    double min_distance = 1e-3;        // sample separation threshold
    bool distance_normalized = false;  // threshold in normalized coordinates
    double improvement_tolerance = 1e-4;
    int max_outer_iterations = 50;
    double kappa_svd = 0.9995;
    mor::IrkaConfig irka;
    optim::ObjectiveSpec objective;
    optim::OptimizerConfig optimizer;
    int final_multi_start = 8;  // starts of the closing mean-model optimization
    int optimizer_starts = 1;   // Thompson-phase starts per outer iteration
    std::uint64_t seed = 0;

    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    Eigen::VectorXd found_optimum;
    double draw_objective = 0.0;   // objective of the Thompson draw at the found optimum
    Eigen::VectorXd accepted_point;
    double fom_objective = 0.0;    // FOM objective at the accepted point
    int global_order = 0;          // r_G
    int surrogate_degree = 0;
    int objective_evaluations = 0;
    int gradient_evaluations = 0;
    bool distance_adjusted = false;
    // wall-clock seconds per subroutine
    double t_reduction = 0.0;
    double t_reprojection = 0.0;
    double t_training = 0.0;
    double t_optimization = 0.0;
    double t_sample_adding = 0.0;
};

struct RunResult {
    Eigen::VectorXd final_point;
    double final_objective = 0.0;  // FOM objective at final_point
    std::vector<IterationRecord> iterations;
    std::vector<sbr::ReducedSample> samples;
    std::vector<Eigen::VectorXd> sample_points;
    int final_global_order = 0;
    bool stopped_by_improvement = false;
    double t_initial_sampling = 0.0;
};

/// The outer loop: full-factorial start, local IRKA reductions (parallel),
/// then per iteration global basis -> reprojection -> SBR fit -> Thompson
/// draw -> gradient-based optimization -> distance-guarded sample extension
/// -> stopping check. The returned optimum is the best FOM-verified point
/// among the accepted samples and a closing multi-start optimization of the
/// posterior-mean model.
RunResult run_adaptive(const FomBuilder& builder, const AdaptiveConfig& config,
                       Execution exec = Execution::par);

/// Mean relative output error of the surrogate-mean ROM against the FOM over
/// the objective band, per evaluation point.
std::vector<double> prom_error_map(const sbr::OperatorSurrogate& surrogate,
                                   const FomBuilder& builder,
                                   const std::vector<Eigen::VectorXd>& eval_points,
                                   const optim::ObjectiveSpec& spec,
                                   Execution exec = Execution::par);

/// JSON round trip of results for post-processing / warm restart.
std::string run_result_to_json(const RunResult& result);

}  // namespace romopt::sampling
