// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels on the hot paths: band transfer sweeps,
// per-entry surrogate fits, and the adjoint gradient.
#include <benchmark/benchmark.h>

#include "romopt/mor/global_basis.hpp"
#include "romopt/optim/adjoint.hpp"
#include "romopt/sampling/design.hpp"
#include "support/test_models.hpp"

using namespace romopt;

namespace {

struct Setup {
    fe::SecondOrderSystem fom;
    std::vector<sbr::ReducedSample> samples;
    sbr::OperatorSurrogate surrogate;
    sbr::SurrogateDraw draw;
    optim::ObjectiveSpec spec;

    Setup() {
        fom = testing::beam(0.03, 0.03, 200);
        const auto pts = sampling::full_factorial(testing::beam_box(), 3);
        std::vector<Eigen::MatrixXd> blocks;
        std::vector<fe::SecondOrderSystem> foms;
        for (const auto& p : pts) {
            foms.push_back(testing::beam(p[0], p[1], 200));
            blocks.push_back(
                mor::irka_second_order(foms.back(), testing::beam_irka(6)).snapshots);
        }
        const auto global = mor::global_basis(blocks, 0.9995);
        std::vector<const fe::SecondOrderSystem*> ptrs;
        for (auto& f : foms) ptrs.push_back(&f);
        const auto roms = mor::reproject_samples(ptrs, global.basis);
        samples.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            samples[i].point = pts[i];
            samples[i].snapshots = blocks[i];
            samples[i].rom = roms[i];
        }
        surrogate = sbr::fit_operator_surrogate(samples, testing::beam_box());
        draw = sbr::thompson_draw(surrogate, 1);
        spec = testing::beam_objective();
    }
};

Setup& setup() {
    static Setup s;
    return s;
}

void bm_transfer(benchmark::State& state, Execution exec) {
    auto& s = setup();
    const auto grid = mor::FrequencyGrid::equispaced(50.0, 100.0, 51);
    for (auto _ : state) {
        auto mags = mor::transfer_magnitudes(s.fom, grid, exec);
        benchmark::DoNotOptimize(mags);
    }
}

void bm_surrogate_fit(benchmark::State& state, Execution exec) {
    auto& s = setup();
    for (auto _ : state) {
        auto sur = sbr::fit_operator_surrogate(s.samples, testing::beam_box(), {}, exec);
        benchmark::DoNotOptimize(sur);
    }
}

void bm_adjoint_gradient(benchmark::State& state, Execution exec) {
    auto& s = setup();
    const Eigen::Vector2d p(0.032, 0.027);
    for (auto _ : state) {
        auto g = optim::adjoint_gradient(s.draw, p, s.spec, exec);
        benchmark::DoNotOptimize(g);
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_transfer, serial, Execution::seq)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_transfer, openmp, Execution::par)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_surrogate_fit, serial, Execution::seq)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_surrogate_fit, openmp, Execution::par)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_adjoint_gradient, serial, Execution::seq)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_adjoint_gradient, openmp, Execution::par)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
