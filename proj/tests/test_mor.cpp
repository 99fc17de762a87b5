// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "romopt/mor/global_basis.hpp"
#include "romopt/rng.hpp"
#include "support/test_models.hpp"

using namespace romopt;
using mor::Complex;

namespace {

fe::SecondOrderSystem scalar_system(double m, double c, double k) {
    fe::SecondOrderSystem sys;
    sys.M.resize(1, 1);
    sys.C.resize(1, 1);
    sys.K.resize(1, 1);
    sys.M.insert(0, 0) = m;
    sys.C.insert(0, 0) = c;
    sys.K.insert(0, 0) = k;
    sys.M.makeCompressed();
    sys.C.makeCompressed();
    sys.K.makeCompressed();
    sys.f = Eigen::VectorXd::Ones(1);
    sys.g = Eigen::VectorXd::Ones(1);
    return sys;
}

fe::SecondOrderSystem random_spd_system(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = rng.normal();
            B(i, j) = rng.normal();
        }
    Eigen::MatrixXd Md = A * A.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Kd = 100.0 * (B * B.transpose() + n * Eigen::MatrixXd::Identity(n, n));
    fe::SecondOrderSystem sys;
    sys.M = Md.sparseView();
    sys.K = Kd.sparseView();
    sys.C = fe::rayleigh_damping(sys.M, sys.K, {0.05, 1e-4});
    sys.f = Eigen::VectorXd::Zero(n);
    sys.g = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        sys.f[i] = rng.normal();
        sys.g[i] = rng.normal();
    }
    return sys;
}

double transfer_abs_err(const fe::SecondOrderSystem& fom, const mor::ReducedSystem& rom,
                        Complex s) {
    const Complex H = mor::solve_frequency_response(fom, s).output;
    const Complex Hr = mor::solve_frequency_response(rom, s).output;
    return std::abs(H - Hr) / std::abs(H);
}

/// H2 norm of the output error by trapezoid quadrature on a log grid; the
/// integrand decays like w^-4 so the tail past 1e6 rad/s is negligible for
/// the relative comparisons made here.
double h2_error_quadrature(const fe::SecondOrderSystem& fom, const mor::ReducedSystem& rom) {
    const int nq = 2000;
    std::vector<double> w(nq);
    const double lo = std::log(1e-2), hi = std::log(1e6);
    for (int i = 0; i < nq; ++i) w[i] = std::exp(lo + (hi - lo) * i / (nq - 1));
    double acc = 0.0;
    double prev_val = 0.0, prev_w = 0.0;
    for (int i = 0; i < nq; ++i) {
        const Complex s(0.0, w[i]);
        const Complex e = mor::solve_frequency_response(fom, s).output -
                          mor::solve_frequency_response(rom, s).output;
        const double val = std::norm(e);
        if (i > 0) acc += 0.5 * (val + prev_val) * (w[i] - prev_w);
        prev_val = val;
        prev_w = w[i];
    }
    return std::sqrt(acc / M_PI);
}

}  // namespace

TEST_CASE("frequency grid construction") {
    auto g = mor::FrequencyGrid::equispaced(50.0, 100.0, 51);
    CHECK(g.size() == 51);
    CHECK(g.frequencies_hz.front() == 50.0);
    CHECK(g.frequencies_hz.back() == 100.0);
    CHECK(g.s(1) == Complex(0.0, 2.0 * M_PI * 51.0));
    CHECK_THROWS_AS(mor::FrequencyGrid::from_hz({1.0, 1.0}), ConfigError);
}

TEST_CASE("scalar frequency response solves") {
    auto sys = scalar_system(1.0, 0.0, 4.0);
    SUBCASE("static solve") {
        auto r = mor::solve_frequency_response(sys, Complex(0.0, 0.0));
        CHECK(r.state[0].real() == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(r.state[0].imag()) < 1e-15);
        CHECK(r.output.real() == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("undamped resonance is singular") {
        CHECK_THROWS_AS(mor::solve_frequency_response(sys, Complex(0.0, 2.0)),
                        SingularSystemError);
    }
    SUBCASE("analytic damped response") {
        auto damped = scalar_system(1.0, 0.1, 1.0);
        auto r = mor::solve_frequency_response(damped, Complex(0.0, 1.0));
        CHECK(std::abs(r.output - Complex(0.0, -10.0)) < 1e-12);
    }
}

TEST_CASE("transfer magnitudes") {
    SUBCASE("static chain of unit stiffness") {
        auto sys = scalar_system(0.0, 0.0, 1.0);
        auto g = mor::FrequencyGrid::from_hz({1e-6, 2e-6, 3e-6});
        auto mags = mor::transfer_magnitudes(sys, g);
        REQUIRE(mags.size() == 3);
        for (double m : mags) CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("same-length output as grid") {
        auto sys = testing::beam(0.02, 0.02, 10);
        auto g = mor::FrequencyGrid::equispaced(1.0, 10.0, 7);
        CHECK(mor::transfer_magnitudes(sys, g).size() == 7);
    }
}

TEST_CASE("projection") {
    auto sys = testing::beam(0.02, 0.03, 5);
    const Eigen::Index n = sys.size();

    SUBCASE("identity basis reproduces the full system") {
        mor::ReducedBasis V{Eigen::MatrixXd::Identity(n, n)};
        auto rom = mor::project(sys, V);
        CHECK((rom.K - Eigen::MatrixXd(sys.K)).norm() == 0.0);
        CHECK((rom.M - Eigen::MatrixXd(sys.M)).norm() == 0.0);
        CHECK((rom.f - sys.f).norm() == 0.0);
    }
    SUBCASE("rank-1 basis aligned with the static solution is statically exact") {
        Eigen::VectorXd xs = Eigen::SimplicialLDLT<fe::SparseMat>(sys.K).solve(sys.f);
        mor::ReducedBasis V{xs.normalized()};
        auto rom = mor::project(sys, V);
        const double y_full = sys.g.dot(xs);
        auto r = mor::solve_frequency_response(rom, Complex(0.0, 0.0));
        CHECK(r.output.real() == doctest::Approx(y_full).epsilon(1e-10));
    }
    SUBCASE("congruence keeps symmetry") {
        Rng rng(3);
        Eigen::MatrixXd W(n, 3);
        for (Eigen::Index i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j) W(i, j) = rng.normal();
        mor::ReducedBasis V{mor::orthonormalize_columns(W)};
        auto rom = mor::project(sys, V);
        CHECK((rom.M - rom.M.transpose()).cwiseAbs().maxCoeff() <
              1e-12 * rom.M.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("second-order IRKA on the beam") {
    auto sys = testing::beam(0.05, 0.05, 60);
    auto result = mor::irka_second_order(sys, testing::beam_irka(6));

    CHECK(result.basis.order() == 6);
    // orthonormality invariant
    const Eigen::MatrixXd VtV = result.basis.V.transpose() * result.basis.V;
    CHECK((VtV - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-10);

    // moment matching at the expansion points the basis was built from
    auto rom = mor::project(sys, result.basis);
    for (const Complex& s : result.shifts) CHECK(transfer_abs_err(sys, rom, s) < 1e-8);

    // the ROM tracks the FOM over the band away from resonance peaks
    auto eigs = mor::quadratic_eigenvalues(rom);
    std::vector<double> peaks;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        peaks.push_back(std::abs(eigs[i].imag()) / (2.0 * M_PI));
    auto grid = mor::FrequencyGrid::equispaced(1.0, 250.0, 250);
    for (double f : grid.frequencies_hz) {
        bool near_peak = false;
        for (double p : peaks)
            if (std::abs(f - p) < std::max(2.0, 0.05 * p)) near_peak = true;
        if (near_peak) continue;
        CHECK(transfer_abs_err(sys, rom, Complex(0.0, 2.0 * M_PI * f)) < 1e-3);
    }
}

TEST_CASE("IRKA on a full-rank system converges immediately") {
    auto sys = random_spd_system(4, 11);
    mor::IrkaConfig cfg;
    cfg.order = 4;
    cfg.tolerance = 1e-6;
    cfg.max_iterations = 10;
    cfg.initial_shifts = mor::IrkaConfig::linspace_shifts(-10.0, 10.0, 4);
    auto result = mor::irka_second_order(sys, cfg);
    CHECK(result.converged);
    CHECK(result.iterations <= 2);
    // V spans the full state space, so the reduction is exact
    auto rom = mor::project(sys, result.basis);
    CHECK(transfer_abs_err(sys, rom, Complex(0.0, 1.0)) < 1e-10);
}

TEST_CASE("IRKA H2 error is non-increasing over the final iteration") {
    auto sys = random_spd_system(20, 5);
    mor::IrkaConfig cfg;
    cfg.order = 4;
    cfg.tolerance = 1e-6;
    cfg.max_iterations = 12;
    cfg.initial_shifts = mor::IrkaConfig::linspace_shifts(-50.0, 50.0, 4);
    auto full = mor::irka_second_order(sys, cfg);
    REQUIRE(full.iterations >= 2);
    cfg.max_iterations = full.iterations - 1;
    auto prev = mor::irka_second_order(sys, cfg);

    const double e_final = h2_error_quadrature(sys, mor::project(sys, full.basis));
    const double e_prev = h2_error_quadrature(sys, mor::project(sys, prev.basis));
    CHECK(e_final <= e_prev * (1.0 + 1e-6));
}

TEST_CASE("global basis truncation") {
    // an orthonormal 6-column block, duplicated: no new information
    auto sys = testing::beam(0.03, 0.03, 40);
    auto irka = mor::irka_second_order(sys, testing::beam_irka(6));
    const Eigen::MatrixXd& V = irka.basis.V;

    SUBCASE("duplicated orthonormal bases keep rank and span") {
        auto res = mor::global_basis({V, V}, 0.9995);
        CHECK(res.order == 6);
        CHECK((res.basis.V.transpose() * res.basis.V - Eigen::MatrixXd::Identity(6, 6)).norm() <
              1e-10);
        // span(V_G) == span(V): projecting V onto V_G loses nothing
        const Eigen::MatrixXd P = res.basis.V * (res.basis.V.transpose() * V);
        CHECK((P - V).norm() < 1e-9);
    }
    SUBCASE("kappa = 1 keeps the numerical rank") {
        auto res = mor::global_basis({V, V}, 1.0);
        CHECK(res.order == 6);
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(mor::global_basis({}, 0.9995), ConfigError);
    }
}

TEST_CASE("reprojection in a shared global basis") {
    auto sysA = testing::beam(0.01, 0.01, 40);
    auto sysB = testing::beam(0.05, 0.05, 40);
    auto irkaA = mor::irka_second_order(sysA, testing::beam_irka(6));
    auto irkaB = mor::irka_second_order(sysB, testing::beam_irka(6));

    SUBCASE("single sample with its own basis equals project") {
        auto direct = mor::project(sysA, irkaA.basis);
        auto re = mor::reproject_samples({&sysA}, irkaA.basis);
        CHECK((re[0].K - direct.K).norm() == 0.0);
    }
    SUBCASE("samples sharing f get identical reduced inputs") {
        auto res = mor::global_basis({irkaA.snapshots, irkaB.snapshots}, 1.0);
        auto roms = mor::reproject_samples({&sysA, &sysB}, res.basis);
        CHECK((roms[0].f - roms[1].f).norm() < 1e-12 * roms[0].f.norm());
    }
}

TEST_CASE("reprojected corner ROMs track their FOMs over the band") {
    // 2x2 corners of the beam box; full-rank global basis of the snapshot
    // concatenation (kappa = 1) keeps every interpolation direction.
    std::vector<fe::SecondOrderSystem> foms;
    std::vector<Eigen::MatrixXd> blocks;
    for (double t : {0.01, 0.05})
        for (double h : {0.01, 0.05}) {
            foms.push_back(testing::beam(t, h, 60));
            blocks.push_back(
                mor::irka_second_order(foms.back(), testing::beam_irka(6)).snapshots);
        }
    auto global = mor::global_basis(blocks, 1.0);
    std::vector<const fe::SecondOrderSystem*> ptrs;
    for (auto& f : foms) ptrs.push_back(&f);
    auto roms = mor::reproject_samples(ptrs, global.basis);

    auto grid = mor::FrequencyGrid::equispaced(50.0, 100.0, 26);
    for (std::size_t i = 0; i < foms.size(); ++i) {
        auto y_fom = mor::transfer_magnitudes(foms[i], grid);
        auto y_rom = mor::transfer_magnitudes(roms[i], grid);
        for (std::size_t q = 0; q < y_fom.size(); ++q)
            CHECK(std::abs(y_rom[q] - y_fom[q]) / y_fom[q] < 1e-3);
    }
}
