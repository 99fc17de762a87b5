// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "romopt/mor/global_basis.hpp"
#include "support/test_models.hpp"

using namespace romopt;

namespace {

sampling::AdaptiveConfig small_beam_config(std::uint64_t seed) {
    sampling::AdaptiveConfig cfg;
    cfg.bounds = testing::beam_box();
    cfg.initial_levels = 2;
    cfg.min_distance = 12.5e-4;
    cfg.improvement_tolerance = 1e-4;
    cfg.max_outer_iterations = 4;  // short smoke run
    cfg.kappa_svd = 0.9995;
    cfg.irka = testing::beam_irka(6);
    cfg.objective = testing::beam_objective();
    cfg.objective.points = 26;  // light grid for the unit tests
    cfg.optimizer.bounds = cfg.bounds;
    cfg.optimizer.gradient_tolerance = 1e-8;
    cfg.final_multi_start = 4;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("full factorial designs") {
    auto box = testing::beam_box();
    SUBCASE("2 levels in 2D are the corners") {
        auto pts = sampling::full_factorial(box, 2);
        REQUIRE(pts.size() == 4);
        CHECK(pts.front() == Eigen::Vector2d(0.01, 0.01));
        CHECK(pts.back() == Eigen::Vector2d(0.05, 0.05));
    }
    SUBCASE("3 levels include the center") {
        auto pts = sampling::full_factorial(box, 3);
        REQUIRE(pts.size() == 9);
        bool has_center = false;
        for (const auto& p : pts)
            if ((p - Eigen::Vector2d(0.03, 0.03)).norm() < 1e-15) has_center = true;
        CHECK(has_center);
    }
    SUBCASE("1 level degenerates to the center") {
        auto pts = sampling::full_factorial(box, 1);
        REQUIRE(pts.size() == 1);
        CHECK((pts[0] - Eigen::Vector2d(0.03, 0.03)).norm() < 1e-15);
    }
}

TEST_CASE("minimum-distance enforcement") {
    auto box = testing::beam_box();
    const double thr = 12.5e-4;

    SUBCASE("coincident point is pushed to the threshold") {
        std::vector<Eigen::VectorXd> existing{Eigen::Vector2d(0.03, 0.03)};
        auto res = sampling::enforce_min_distance(Eigen::Vector2d(0.03, 0.03), existing, thr, box);
        CHECK(res.satisfied);
        CHECK((res.point - existing[0]).norm() >= thr);
        CHECK(box.contains(res.point));
    }
    SUBCASE("already-far point is unchanged") {
        std::vector<Eigen::VectorXd> existing{Eigen::Vector2d(0.01, 0.01)};
        const Eigen::Vector2d p(0.04, 0.04);
        auto res = sampling::enforce_min_distance(p, existing, thr, box);
        CHECK((res.point - p).norm() == 0.0);
    }
    SUBCASE("occupied corner moves along the boundary") {
        std::vector<Eigen::VectorXd> existing{Eigen::Vector2d(0.05, 0.05)};
        auto res = sampling::enforce_min_distance(Eigen::Vector2d(0.05, 0.05), existing, thr, box);
        CHECK(res.satisfied);
        CHECK(box.contains(res.point));
        CHECK((res.point - existing[0]).norm() >= thr);
    }
    SUBCASE("box too small flags best effort") {
        sbr::ParameterBox tiny;
        tiny.lo = Eigen::Vector2d(0.0, 0.0);
        tiny.hi = Eigen::Vector2d(1e-4, 1e-4);
        std::vector<Eigen::VectorXd> existing{Eigen::Vector2d(0.0, 0.0),
                                              Eigen::Vector2d(1e-4, 0.0),
                                              Eigen::Vector2d(0.0, 1e-4),
                                              Eigen::Vector2d(1e-4, 1e-4),
                                              Eigen::Vector2d(5e-5, 5e-5)};
        auto res = sampling::enforce_min_distance(Eigen::Vector2d(5e-5, 5e-5), existing, thr,
                                                  tiny);
        CHECK_FALSE(res.satisfied);
    }
}

TEST_CASE("stopping criterion") {
    SUBCASE("converged-looking tail pair is below tolerance") {
        std::vector<double> hist{-9.5991, -9.5990};
        const double rel = std::abs(hist[1] - hist[0]) / std::abs(hist[0]);
        CHECK(rel < 1e-3);
        // but a single pair is not enough history to stop
        CHECK_FALSE(sampling::stopping_check(hist, 1e-3, 2, 50));
    }
    SUBCASE("two flat pairs stop") {
        std::vector<double> hist{-9.0, -9.5991, -9.5990, -9.5990};
        CHECK(sampling::stopping_check(hist, 1e-3, 4, 50));
    }
    SUBCASE("strict improvement continues") {
        std::vector<double> hist{-5.0, -5.5, -6.05, -6.655};
        CHECK_FALSE(sampling::stopping_check(hist, 1e-3, 4, 50));
    }
    SUBCASE("single entry continues") {
        CHECK_FALSE(sampling::stopping_check({-1.0}, 1e-3, 1, 50));
    }
    SUBCASE("iteration cap stops") {
        CHECK(sampling::stopping_check({-1.0}, 1e-3, 50, 50));
    }
}

TEST_CASE("adaptive run on a coarse beam") {
    auto builder = testing::beam_builder(40);
    auto cfg = small_beam_config(7);
    auto result = sampling::run_adaptive(builder, cfg);

    SUBCASE("one sample per iteration, pairwise separated") {
        CHECK(result.sample_points.size() == 4 + result.iterations.size());
        for (std::size_t i = 0; i < result.sample_points.size(); ++i)
            for (std::size_t j = i + 1; j < result.sample_points.size(); ++j)
                CHECK((result.sample_points[i] - result.sample_points[j]).norm() >=
                      cfg.min_distance * (1.0 - 1e-9));
    }
    SUBCASE("global order never shrinks") {
        for (std::size_t i = 1; i < result.iterations.size(); ++i)
            CHECK(result.iterations[i].global_order >= result.iterations[i - 1].global_order);
    }
    SUBCASE("surrogate model count follows the triangle formula") {
        CHECK(static_cast<int>(result.samples.front().rom.size()) ==
              result.final_global_order);
        // refit to inspect the entry count
        auto sur = sbr::fit_operator_surrogate(result.samples, cfg.bounds);
        const int rg = result.final_global_order;
        CHECK(static_cast<int>(sur.k_entries.size()) == rg * (rg + 1) / 2);
    }
    SUBCASE("deterministic replay") {
        auto again = sampling::run_adaptive(builder, cfg);
        CHECK(sampling::run_result_to_json(again) == sampling::run_result_to_json(result));
    }
}

TEST_CASE("adaptive sampling beats the non-adaptive grid near the optimum") {
    auto builder = testing::beam_builder(60);
    auto cfg = small_beam_config(7);
    cfg.max_outer_iterations = 8;
    auto adaptive = sampling::run_adaptive(builder, cfg);
    auto sur_adaptive = sbr::fit_operator_surrogate(adaptive.samples, cfg.bounds);

    // non-adaptive 3^2 full-factorial pROM with one more sample than the
    // adaptive run spends on corners alone
    auto pts = sampling::full_factorial(cfg.bounds, 3);
    std::vector<sbr::ReducedSample> ffd(pts.size());
    std::vector<fe::SecondOrderSystem> foms(pts.size());
    std::vector<Eigen::MatrixXd> blocks(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        foms[i] = builder(pts[i]);
        blocks[i] = mor::irka_second_order(foms[i], cfg.irka).snapshots;
        ffd[i].point = pts[i];
        ffd[i].snapshots = blocks[i];
    }
    auto global = mor::global_basis(blocks, cfg.kappa_svd);
    std::vector<const fe::SecondOrderSystem*> ptrs;
    for (auto& f : foms) ptrs.push_back(&f);
    auto roms = mor::reproject_samples(ptrs, global.basis);
    for (std::size_t i = 0; i < pts.size(); ++i) ffd[i].rom = roms[i];
    auto sur_ffd = sbr::fit_operator_surrogate(ffd, cfg.bounds);

    // mean error near the optimum: the adaptive model is locally finer
    std::vector<Eigen::VectorXd> near_opt{adaptive.final_point,
                                          adaptive.final_point - Eigen::Vector2d(0.0, 0.002)};
    auto err_adaptive = sampling::prom_error_map(sur_adaptive, builder, near_opt, cfg.objective);
    auto err_ffd = sampling::prom_error_map(sur_ffd, builder, near_opt, cfg.objective);
    for (std::size_t i = 0; i < near_opt.size(); ++i) CHECK(err_adaptive[i] < err_ffd[i]);
}

TEST_CASE("error map properties") {
    auto builder = testing::beam_builder(40);
    // three affinely independent samples: the degree-1 fit interpolates them,
    // so at a sample the map reduces to the reprojected-ROM-vs-FOM error
    std::vector<Eigen::VectorXd> pts{Eigen::Vector2d(0.01, 0.01), Eigen::Vector2d(0.05, 0.01),
                                     Eigen::Vector2d(0.01, 0.05)};
    std::vector<sbr::ReducedSample> samples;
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<fe::SecondOrderSystem> foms;
    for (const auto& p : pts) {
        foms.push_back(builder(p));
        blocks.push_back(mor::irka_second_order(foms.back(), testing::beam_irka(6)).snapshots);
    }
    auto global = mor::global_basis(blocks, 1.0);
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
    auto sur = sbr::fit_operator_surrogate(samples, testing::beam_box());
    REQUIRE(sur.basis.degree == 1);

    auto spec = testing::beam_objective();
    spec.points = 11;
    std::vector<Eigen::VectorXd> eval_pts = pts;
    eval_pts.push_back(Eigen::Vector2d(0.04, 0.04));
    auto errors = sampling::prom_error_map(sur, builder, eval_pts, spec);
    REQUIRE(errors.size() == 4);
    for (double e : errors) CHECK(e >= 0.0);

    // direct reprojected-ROM error at each sample as the reference
    auto grid = spec.grid();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto y_fom = mor::transfer_magnitudes(foms[i], grid);
        auto y_rom = mor::transfer_magnitudes(roms[i], grid);
        double ref = 0.0;
        for (std::size_t q = 0; q < y_fom.size(); ++q)
            ref += std::abs(y_rom[q] - y_fom[q]) / y_fom[q];
        ref /= static_cast<double>(y_fom.size());
        CHECK(errors[i] == doctest::Approx(ref).epsilon(1e-3));
    }
}
