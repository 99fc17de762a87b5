// SPDX-License-Identifier: Apache-2.0
#include "romopt/sbr/surrogate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "romopt/rng.hpp"

namespace romopt::sbr {

using nlohmann::json;

int OperatorSurrogate::triangle_index(int i, int j, int n) {
    // row-major upper triangle, i <= j
    return i * n - i * (i - 1) / 2 + (j - i);
}

int adaptive_degree(int sample_count, int dim, int cap) {
    int deg = 0;
    while (deg < cap && binomial(deg + 1 + dim, dim) <= sample_count) ++deg;
    return deg;
}

OperatorSurrogate fit_operator_surrogate(const std::vector<ReducedSample>& samples,
                                         const ParameterBox& box, const SurrogateConfig& config,
                                         Execution exec) {
    if (samples.size() < 2) throw ConfigError("fit_operator_surrogate: need >= 2 samples");
    box.validate();
    const int rg = static_cast<int>(samples.front().rom.size());
    for (const auto& s : samples)
        if (s.rom.size() != rg)
            throw DimensionMismatchError("fit_operator_surrogate: inconsistent reduced orders");

    OperatorSurrogate sur;
    sur.box = box;
    sur.order = rg;
    const int deg = adaptive_degree(static_cast<int>(samples.size()), box.dim(),
                                    config.max_degree);
    sur.basis = PolynomialBasis::total_degree(box.dim(), deg);

    std::vector<Eigen::VectorXd> points;
    points.reserve(samples.size());
    for (const auto& s : samples) points.push_back(s.point);
    const Eigen::MatrixXd X = design_matrix(points, sur.basis, box);

    const int nt = rg * (rg + 1) / 2;
    sur.k_entries.resize(nt);
    sur.c_entries.resize(nt);
    sur.m_entries.resize(nt);

    struct Task {
        const Eigen::MatrixXd mor::ReducedSystem::*op;
        std::vector<SbrPosterior>* out;
    };
    const Task tasks[3] = {{&mor::ReducedSystem::K, &sur.k_entries},
                           {&mor::ReducedSystem::C, &sur.c_entries},
                           {&mor::ReducedSystem::M, &sur.m_entries}};

    const int total = 3 * nt;
    std::exception_ptr err;
    auto fit_one = [&](int t) {
        const Task& task = tasks[t / nt];
        const int e = t % nt;
        // invert the triangle index
        int i = 0, row_start = 0;
        while (row_start + (rg - i) <= e) {
            row_start += rg - i;
            ++i;
        }
        const int j = i + (e - row_start);
        Eigen::VectorXd targets(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k)
            targets[k] = (samples[k].rom.*(task.op))(i, j);
        (*task.out)[e] = sbr_fit(X, targets, config.sbr);
    };

    if (exec == Execution::par) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int t = 0; t < total; ++t) {
            try {
                fit_one(t);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int t = 0; t < total; ++t) fit_one(t);
    }

    sur.f_r = samples.front().rom.f;
    sur.g_r = samples.front().rom.g;
    return sur;
}

namespace {

/// beta_mu + L z on the active block; L from LLT of Sigma + jitter, falling
/// back to an eigenvalue factorization with clamped spectrum.
Eigen::VectorXd draw_entry(const SbrPosterior& post, Rng& rng) {
    const int nf = static_cast<int>(post.mean.size());
    std::vector<int> idx;
    for (int i = 0; i < nf; ++i)
        if (post.active[i]) idx.push_back(i);
    const int na = static_cast<int>(idx.size());

    Eigen::MatrixXd Sa(na, na);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) Sa(a, b) = post.covariance(idx[a], idx[b]);

    Eigen::VectorXd out = post.mean;
    const double dmax = na ? Sa.diagonal().cwiseAbs().maxCoeff() : 0.0;
    if (dmax <= 0.0) return out;  // Sigma = 0 reproduces the mean exactly

    Eigen::MatrixXd L;
    Eigen::MatrixXd jittered = Sa;
    jittered.diagonal().array() += 1e-12 * dmax;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) {
        L = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Sa);
        L = eig.eigenvectors() *
            eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }
    Eigen::VectorXd z(na);
    for (int a = 0; a < na; ++a) z[a] = rng.normal();
    const Eigen::VectorXd step = L * z;
    for (int a = 0; a < na; ++a) out[idx[a]] += step[a];
    return out;
}

void draw_matrix(const std::vector<SbrPosterior>& entries, Eigen::MatrixXd& coeffs,
                 std::uint64_t seed, std::uint64_t matrix_tag, int nf, Execution exec) {
    const int nt = static_cast<int>(entries.size());
    coeffs.resize(nt, nf);
    auto one = [&](int e) {
        Rng rng(derive_seed(seed, matrix_tag, static_cast<std::uint64_t>(e)));
        coeffs.row(e) = draw_entry(entries[e], rng).transpose();
    };
    if (exec == Execution::par) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < nt; ++e) one(e);
    } else {
        for (int e = 0; e < nt; ++e) one(e);
    }
}

}  // namespace

SurrogateDraw thompson_draw(const OperatorSurrogate& surrogate, std::uint64_t seed,
                            Execution exec) {
    SurrogateDraw d;
    d.basis = surrogate.basis;
    d.box = surrogate.box;
    d.order = surrogate.order;
    d.f_r = surrogate.f_r;
    d.g_r = surrogate.g_r;
    d.seed = seed;
    const int nf = surrogate.basis.size();
    draw_matrix(surrogate.k_entries, d.k_coeffs, seed, 1, nf, exec);
    draw_matrix(surrogate.c_entries, d.c_coeffs, seed, 2, nf, exec);
    draw_matrix(surrogate.m_entries, d.m_coeffs, seed, 3, nf, exec);
    return d;
}

SurrogateDraw mean_draw(const OperatorSurrogate& surrogate) {
    SurrogateDraw d;
    d.basis = surrogate.basis;
    d.box = surrogate.box;
    d.order = surrogate.order;
    d.f_r = surrogate.f_r;
    d.g_r = surrogate.g_r;
    d.seed = 0;
    const int nf = surrogate.basis.size();
    const int nt = surrogate.triangle_size();
    d.k_coeffs.resize(nt, nf);
    d.c_coeffs.resize(nt, nf);
    d.m_coeffs.resize(nt, nf);
    for (int e = 0; e < nt; ++e) {
        d.k_coeffs.row(e) = surrogate.k_entries[e].mean.transpose();
        d.c_coeffs.row(e) = surrogate.c_entries[e].mean.transpose();
        d.m_coeffs.row(e) = surrogate.m_entries[e].mean.transpose();
    }
    return d;
}

namespace {

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& coeffs, const Eigen::VectorXd& phi, int n) {
    const Eigen::VectorXd vals = coeffs * phi;
    Eigen::MatrixXd A(n, n);
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++e) {
            A(i, j) = vals[e];
            A(j, i) = vals[e];
        }
    return A;
}

}  // namespace

mor::ReducedSystem evaluate_draw(const SurrogateDraw& draw, const Eigen::VectorXd& p) {
    const Eigen::VectorXd phi = draw.basis.evaluate(draw.box.normalize(p));
    mor::ReducedSystem sys;
    sys.K = reconstruct(draw.k_coeffs, phi, draw.order);
    sys.C = reconstruct(draw.c_coeffs, phi, draw.order);
    sys.M = reconstruct(draw.m_coeffs, phi, draw.order);
    sys.f = draw.f_r;
    sys.g = draw.g_r;
    return sys;
}

DrawDerivatives differentiate_draw(const SurrogateDraw& draw) {
    DrawDerivatives d;
    d.draw = &draw;
    return d;
}

DrawDerivatives::Matrices DrawDerivatives::evaluate(const Eigen::VectorXd& p, int j) const {
    const Eigen::VectorXd q = draw->box.normalize(p);
    // chain rule through q_j = (p_j - lo_j) / (hi_j - lo_j)
    const double scale = 1.0 / (draw->box.hi[j] - draw->box.lo[j]);
    const Eigen::VectorXd dphi = draw->basis.evaluate_derivative(q, j) * scale;
    Matrices m;
    m.dK = reconstruct(draw->k_coeffs, dphi, draw->order);
    m.dC = reconstruct(draw->c_coeffs, dphi, draw->order);
    m.dM = reconstruct(draw->m_coeffs, dphi, draw->order);
    return m;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
    return v;
}

json posterior_to_json(const SbrPosterior& p) {
    json j;
    j["mean"] = vec_to_json(p.mean);
    j["alpha"] = vec_to_json(p.alpha);
    j["gamma"] = vec_to_json(p.gamma);
    j["noise_variance"] = p.noise_variance;
    j["active"] = json::array();
    for (char a : p.active) j["active"].push_back(a != 0);
    // store the active covariance block row-major
    json cov = json::array();
    for (std::size_t a = 0; a < p.active.size(); ++a)
        for (std::size_t b = 0; b < p.active.size(); ++b)
            if (p.active[a] && p.active[b])
                cov.push_back(p.covariance(static_cast<Eigen::Index>(a),
                                           static_cast<Eigen::Index>(b)));
    j["covariance_active"] = std::move(cov);
    return j;
}

SbrPosterior posterior_from_json(const json& j) {
    SbrPosterior p;
    p.mean = vec_from_json(j.at("mean"));
    p.alpha = vec_from_json(j.at("alpha"));
    p.gamma = vec_from_json(j.at("gamma"));
    p.noise_variance = j.at("noise_variance").get<double>();
    const int nf = static_cast<int>(p.mean.size());
    p.active.resize(nf);
    for (int i = 0; i < nf; ++i) p.active[i] = j.at("active")[i].get<bool>() ? 1 : 0;
    p.covariance = Eigen::MatrixXd::Zero(nf, nf);
    std::size_t at = 0;
    const auto& cov = j.at("covariance_active");
    for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b)
            if (p.active[a] && p.active[b]) p.covariance(a, b) = cov[at++].get<double>();
    return p;
}

}  // namespace

std::string surrogate_to_json(const OperatorSurrogate& s) {
    json j;
    j["order"] = s.order;
    j["box"]["lo"] = vec_to_json(s.box.lo);
    j["box"]["hi"] = vec_to_json(s.box.hi);
    j["basis"]["dim"] = s.basis.dim;
    j["basis"]["degree"] = s.basis.degree;
    j["basis"]["exponents"] = s.basis.exponents;
    j["f_r"] = vec_to_json(s.f_r);
    j["g_r"] = vec_to_json(s.g_r);
    for (const char* key : {"K", "C", "M"}) {
        const auto& entries = key[0] == 'K' ? s.k_entries
                            : key[0] == 'C' ? s.c_entries
                                            : s.m_entries;
        json arr = json::array();
        for (const auto& e : entries) arr.push_back(posterior_to_json(e));
        j["entries"][key] = std::move(arr);
    }
    return j.dump();
}

OperatorSurrogate surrogate_from_json(const std::string& text) {
    const json j = json::parse(text);
    OperatorSurrogate s;
    s.order = j.at("order").get<int>();
    s.box.lo = vec_from_json(j.at("box").at("lo"));
    s.box.hi = vec_from_json(j.at("box").at("hi"));
    s.basis.dim = j.at("basis").at("dim").get<int>();
    s.basis.degree = j.at("basis").at("degree").get<int>();
    s.basis.exponents = j.at("basis").at("exponents").get<std::vector<std::vector<int>>>();
    s.f_r = vec_from_json(j.at("f_r"));
    s.g_r = vec_from_json(j.at("g_r"));
    for (const char* key : {"K", "C", "M"}) {
        auto& entries = key[0] == 'K' ? s.k_entries
                      : key[0] == 'C' ? s.c_entries
                                      : s.m_entries;
        for (const auto& e : j.at("entries").at(key)) entries.push_back(posterior_from_json(e));
    }
    return s;
}

}  // namespace romopt::sbr
