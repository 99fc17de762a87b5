// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels: results must be bit-identical, and the
// adaptive pipeline must not depend on the thread count.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "romopt/mor/global_basis.hpp"
#include "support/test_models.hpp"

using namespace romopt;

namespace {

std::vector<sbr::ReducedSample> beam_corner_samples(int elements) {
    std::vector<sbr::ReducedSample> samples;
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<fe::SecondOrderSystem> foms;
    auto pts = sampling::full_factorial(testing::beam_box(), 2);
    for (const auto& p : pts) {
        foms.push_back(testing::beam(p[0], p[1], elements));
        blocks.push_back(mor::irka_second_order(foms.back(), testing::beam_irka(6)).snapshots);
    }
    auto global = mor::global_basis(blocks, 0.9995);
    std::vector<const fe::SecondOrderSystem*> ptrs;
    for (auto& f : foms) ptrs.push_back(&f);
    auto roms = mor::reproject_samples(ptrs, global.basis);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        sbr::ReducedSample s;
        s.point = pts[i];
        s.snapshots = blocks[i];
        s.rom = roms[i];
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace

TEST_CASE("transfer magnitudes: parallel equals serial bitwise") {
    auto sys = testing::beam(0.02, 0.03, 50);
    auto grid = mor::FrequencyGrid::equispaced(10.0, 200.0, 33);
    auto seq = mor::transfer_magnitudes(sys, grid, Execution::seq);
    auto par = mor::transfer_magnitudes(sys, grid, Execution::par);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) CHECK(seq[i] == par[i]);
}

TEST_CASE("surrogate fit: parallel equals serial bitwise") {
    auto samples = beam_corner_samples(40);
    auto box = testing::beam_box();
    auto a = sbr::fit_operator_surrogate(samples, box, {}, Execution::seq);
    auto b = sbr::fit_operator_surrogate(samples, box, {}, Execution::par);
    REQUIRE(a.k_entries.size() == b.k_entries.size());
    for (std::size_t e = 0; e < a.k_entries.size(); ++e) {
        CHECK((a.k_entries[e].mean - b.k_entries[e].mean).norm() == 0.0);
        CHECK((a.k_entries[e].covariance - b.k_entries[e].covariance).norm() == 0.0);
        CHECK((a.m_entries[e].mean - b.m_entries[e].mean).norm() == 0.0);
    }
}

TEST_CASE("thompson draw: parallel equals serial bitwise") {
    auto samples = beam_corner_samples(40);
    auto sur = sbr::fit_operator_surrogate(samples, testing::beam_box());
    auto a = sbr::thompson_draw(sur, 99, Execution::seq);
    auto b = sbr::thompson_draw(sur, 99, Execution::par);
    CHECK((a.k_coeffs - b.k_coeffs).norm() == 0.0);
    CHECK((a.c_coeffs - b.c_coeffs).norm() == 0.0);
    CHECK((a.m_coeffs - b.m_coeffs).norm() == 0.0);
}

TEST_CASE("adjoint gradient: parallel equals serial bitwise") {
    auto samples = beam_corner_samples(40);
    auto sur = sbr::fit_operator_surrogate(samples, testing::beam_box());
    auto draw = sbr::thompson_draw(sur, 5);
    auto spec = testing::beam_objective();
    spec.points = 21;
    const Eigen::Vector2d p(0.027, 0.041);
    auto a = optim::adjoint_gradient(draw, p, spec, Execution::seq);
    auto b = optim::adjoint_gradient(draw, p, spec, Execution::par);
    CHECK(a.value == b.value);
    CHECK((a.gradient - b.gradient).norm() == 0.0);
}

TEST_CASE("adaptive run is independent of the thread count") {
    auto builder = testing::beam_builder(30);
    sampling::AdaptiveConfig cfg;
    cfg.bounds = testing::beam_box();
    cfg.initial_levels = 2;
    cfg.min_distance = 12.5e-4;
    cfg.max_outer_iterations = 2;
    cfg.irka = testing::beam_irka(6);
    cfg.objective = testing::beam_objective();
    cfg.objective.points = 11;
    cfg.optimizer.bounds = cfg.bounds;
    cfg.final_multi_start = 2;
    cfg.seed = 3;

    const int saved = worker_count();
    set_worker_count(1);
    auto r1 = sampling::run_adaptive(builder, cfg);
    set_worker_count(2);
    auto r2 = sampling::run_adaptive(builder, cfg);
    set_worker_count(saved);
    CHECK(sampling::run_result_to_json(r1) == sampling::run_result_to_json(r2));

    // and against the fully serial path
    auto r3 = sampling::run_adaptive(builder, cfg, Execution::seq);
    CHECK(sampling::run_result_to_json(r1) == sampling::run_result_to_json(r3));
}
