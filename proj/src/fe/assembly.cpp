// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include "romopt/fe/beam_element.hpp"
#include "romopt/fe/kelvin_cell.hpp"
#include "romopt/fe/timoshenko_beam.hpp"

namespace romopt::fe {

SparseMat rayleigh_damping(const SparseMat& M, const SparseMat& K,
                           const RayleighDamping& damping) {
    if (M.rows() != K.rows() || M.cols() != K.cols())
        throw DimensionMismatchError("rayleigh_damping: M and K dimensions differ");
    damping.validate();
    SparseMat C = damping.mass_coefficient * M + damping.stiffness_coefficient * K;
    C.makeCompressed();
    return C;
}

namespace {

struct Triplets {
    std::vector<Eigen::Triplet<double>> k, m;

    void add_element(const Mat12& Ke, const Mat12& Me, const std::array<int, 12>& dofs) {
        for (int a = 0; a < 12; ++a)
            for (int b = 0; b < 12; ++b) {
                k.emplace_back(dofs[a], dofs[b], Ke(a, b));
                m.emplace_back(dofs[a], dofs[b], Me(a, b));
            }
    }
};

std::array<int, 12> node_pair_dofs(int ni, int nj) {
    std::array<int, 12> dofs;
    for (int c = 0; c < 6; ++c) {
        dofs[c] = 6 * ni + c;
        dofs[6 + c] = 6 * nj + c;
    }
    return dofs;
}

/// Eliminate the listed DOFs by row/column removal (keeps SPD structure exact).
void eliminate_dofs(SecondOrderSystem& sys, const std::vector<int>& drop) {
    const Eigen::Index n = sys.K.rows();
    std::vector<char> dropped(n, 0);
    for (int d : drop) dropped[d] = 1;
    std::vector<Eigen::Index> map(n, -1);
    Eigen::Index nk = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!dropped[i]) map[i] = nk++;

    auto shrink = [&](const SparseMat& A) {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(A.nonZeros());
        for (Eigen::Index col = 0; col < A.outerSize(); ++col)
            for (SparseMat::InnerIterator it(A, col); it; ++it)
                if (map[it.row()] >= 0 && map[it.col()] >= 0)
                    t.emplace_back(map[it.row()], map[it.col()], it.value());
        SparseMat B(nk, nk);
        B.setFromTriplets(t.begin(), t.end());
        B.makeCompressed();
        return B;
    };
    sys.M = shrink(sys.M);
    sys.C = shrink(sys.C);
    sys.K = shrink(sys.K);

    Eigen::VectorXd f(nk), g(nk);
    for (Eigen::Index i = 0; i < n; ++i)
        if (map[i] >= 0) {
            f[map[i]] = sys.f[i];
            g[map[i]] = sys.g[i];
        }
    sys.f = std::move(f);
    sys.g = std::move(g);
}

}  // namespace

SecondOrderSystem assemble_timoshenko_beam(const BeamGeometry& geometry,
                                           const MaterialSpec& material,
                                           const RayleighDamping& damping) {
    geometry.validate();
    material.validate();
    damping.validate();

    const int N = geometry.element_count;
    const double Le = geometry.length / N;
    const BeamSection section = BeamSection::rectangle(geometry.thickness, geometry.height);
    const double E = material.youngs_modulus;
    const double G = material.shear_modulus;

    const Mat12 Ke = timoshenko_stiffness(section, E, G, Le);
    const Mat12 Me = timoshenko_mass(section, material.density, E, G, Le);

    const Eigen::Index ndof = 6 * (N + 1);
    Triplets t;
    t.k.reserve(144 * static_cast<std::size_t>(N));
    t.m.reserve(144 * static_cast<std::size_t>(N));
    for (int e = 0; e < N; ++e) t.add_element(Ke, Me, node_pair_dofs(e, e + 1));

    SecondOrderSystem sys;
    sys.K.resize(ndof, ndof);
    sys.M.resize(ndof, ndof);
    sys.K.setFromTriplets(t.k.begin(), t.k.end());
    sys.M.setFromTriplets(t.m.begin(), t.m.end());

    sys.f = Eigen::VectorXd::Zero(ndof);
    sys.g = Eigen::VectorXd::Zero(ndof);
    const Eigen::Index tip_uz = 6 * static_cast<Eigen::Index>(N) + 2;
    sys.f[tip_uz] = 1.0;  // transverse tip force
    sys.g[tip_uz] = 1.0;  // transverse tip displacement

    std::vector<int> clamped(6);
    for (int c = 0; c < 6; ++c) clamped[c] = c;  // node 0
    eliminate_dofs(sys, clamped);

    sys.C = rayleigh_damping(sys.M, sys.K, damping);
    return sys;
}

// ---------------------------------------------------------------------------
// Kelvin cell
// ---------------------------------------------------------------------------

const KelvinWireframe& kelvin_wireframe() {
    static const KelvinWireframe wf = [] {
        KelvinWireframe w;
        // All permutations of (0, +-1, +-2), sorted lexicographically so the
        // node ordering is stable, then edges between vertices sqrt(2) apart.
        std::vector<Eigen::Vector3d> verts;
        const int axes[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto& ax : axes)
            for (double s1 : {-1.0, 1.0})
                for (double s2 : {-2.0, 2.0}) {
                    Eigen::Vector3d v = Eigen::Vector3d::Zero();
                    v[ax[0]] = 0.0;
                    v[ax[1]] = s1;
                    v[ax[2]] = s2;
                    verts.push_back(v);
                }
        std::sort(verts.begin(), verts.end(), [](const auto& a, const auto& b) {
            if (a.x() != b.x()) return a.x() < b.x();
            if (a.y() != b.y()) return a.y() < b.y();
            return a.z() < b.z();
        });
        verts.erase(std::unique(verts.begin(), verts.end(),
                                [](const auto& a, const auto& b) { return a == b; }),
                    verts.end());
        w.vertices = verts;
        const double edge_len = std::sqrt(2.0);
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j)
                if (std::abs((verts[i] - verts[j]).norm() - edge_len) < 1e-12)
                    w.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        return w;
    }();
    return wf;
}

namespace {

SecondOrderSystem assemble_kelvin_impl(const KelvinCellGeometry& geometry,
                                       const MaterialSpec& material,
                                       const RayleighDamping& damping, bool clamp,
                                       KelvinAssemblyInfo* info) {
    geometry.validate();
    material.validate();
    damping.validate();

    const KelvinWireframe& wf = kelvin_wireframe();
    const Eigen::Vector3d scale(geometry.lx / 4.0, geometry.ly / 4.0, geometry.lz / 4.0);
    const int nel = geometry.elements_per_strut;

    // Vertex nodes first, then the subdivision nodes of each strut in order.
    std::vector<Eigen::Vector3d> nodes;
    nodes.reserve(wf.vertices.size() + wf.edges.size() * (nel - 1));
    for (const auto& v : wf.vertices) nodes.push_back(v.cwiseProduct(scale));

    std::vector<std::pair<int, int>> elements;
    elements.reserve(wf.edges.size() * nel);
    for (const auto& [i, j] : wf.edges) {
        const Eigen::Vector3d a = nodes[i], b = nodes[j];
        int prev = i;
        for (int k = 1; k < nel; ++k) {
            nodes.push_back(a + (b - a) * (static_cast<double>(k) / nel));
            const int nid = static_cast<int>(nodes.size()) - 1;
            elements.emplace_back(prev, nid);
            prev = nid;
        }
        elements.emplace_back(prev, j);
    }

    const double t = geometry.strut_thickness;
    const BeamSection section = BeamSection::rectangle(t, t);
    const double E = material.youngs_modulus;
    const double G = material.shear_modulus;

    const Eigen::Index ndof = 6 * static_cast<Eigen::Index>(nodes.size());
    Triplets trip;
    trip.k.reserve(144 * elements.size());
    trip.m.reserve(144 * elements.size());
    for (const auto& [i, j] : elements) {
        const Eigen::Vector3d d = nodes[j] - nodes[i];
        const double L = d.norm();
        const Mat12 T = element_transformation(beam_rotation(d));
        Mat12 Kg = T.transpose() * timoshenko_stiffness(section, E, G, L) * T;
        Mat12 Mg = T.transpose() * timoshenko_mass(section, material.density, E, G, L) * T;
        // the congruence is symmetric exactly; strip the rotation round-off
        Kg = (0.5 * (Kg + Kg.transpose())).eval();
        Mg = (0.5 * (Mg + Mg.transpose())).eval();
        trip.add_element(Kg, Mg, node_pair_dofs(i, j));
    }

    SecondOrderSystem sys;
    sys.K.resize(ndof, ndof);
    sys.M.resize(ndof, ndof);
    sys.K.setFromTriplets(trip.k.begin(), trip.k.end());
    sys.M.setFromTriplets(trip.m.begin(), trip.m.end());

    // Face node sets. In a wireframe every node with the extremal coordinate
    // lies on the corresponding square face's struts.
    double zmin = nodes[0].z(), xmin = nodes[0].x(), xmax = nodes[0].x();
    for (const auto& p : nodes) {
        zmin = std::min(zmin, p.z());
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
    }
    const double tol = 1e-9 * std::max({geometry.lx, geometry.ly, geometry.lz});
    std::vector<int> bottom, left, right;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (std::abs(nodes[i].z() - zmin) < tol) bottom.push_back(i);
        if (std::abs(nodes[i].x() - xmin) < tol) left.push_back(i);
        if (std::abs(nodes[i].x() - xmax) < tol) right.push_back(i);
    }

    sys.f = Eigen::VectorXd::Zero(ndof);
    sys.g = Eigen::VectorXd::Zero(ndof);
    for (int i : left) sys.f[6 * i] = 1.0 / static_cast<double>(left.size());
    for (int i : right) sys.g[6 * i] = 1.0 / static_cast<double>(right.size());

    if (info) {
        info->node_count = static_cast<int>(nodes.size());
        info->element_count = static_cast<int>(elements.size());
        info->clamped_node_count = static_cast<int>(bottom.size());
        info->input_node_count = static_cast<int>(left.size());
        info->output_node_count = static_cast<int>(right.size());
    }

    if (clamp) {
        std::vector<int> drop;
        drop.reserve(bottom.size() * 6);
        for (int i : bottom)
            for (int c = 0; c < 6; ++c) drop.push_back(6 * i + c);
        std::sort(drop.begin(), drop.end());
        eliminate_dofs(sys, drop);
    }

    sys.C = rayleigh_damping(sys.M, sys.K, damping);
    return sys;
}

}  // namespace

SecondOrderSystem assemble_kelvin_cell(const KelvinCellGeometry& geometry,
                                       const MaterialSpec& material,
                                       const RayleighDamping& damping,
                                       KelvinAssemblyInfo* info) {
    return assemble_kelvin_impl(geometry, material, damping, true, info);
}

SecondOrderSystem assemble_kelvin_cell_free(const KelvinCellGeometry& geometry,
                                            const MaterialSpec& material,
                                            const RayleighDamping& damping) {
    return assemble_kelvin_impl(geometry, material, damping, false, nullptr);
}

}  // namespace romopt::fe
