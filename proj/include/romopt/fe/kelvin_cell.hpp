// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "romopt/fe/second_order_system.hpp"

namespace romopt::fe {

/// Truncated-octahedron frame of square-section struts, scaled per axis.
struct KelvinCellGeometry {
    double lx = 0.0;              // cell extent in x (m)
    double ly = 0.0;              // cell extent in y (m)
    double lz = 0.0;              // cell extent in z (m)
    double strut_thickness = 0.0; // square section side t (m)
    int elements_per_strut = 0;

    void validate() const {
        if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0) || !(strut_thickness > 0.0))
            throw InvalidGeometryError("Kelvin cell dimensions must be positive");
        if (elements_per_strut < 1)
            throw InvalidGeometryError("elements_per_strut must be >= 1");
    }
};

/// Canonical truncated-octahedron wireframe: the 24 permutations of
/// (0, +-1, +-2) as vertices and the 36 edges of length sqrt(2) between them.
/// The cell spans [-2, 2] per axis before scaling.
struct KelvinWireframe {
    std::vector<Eigen::Vector3d> vertices;          // 24 canonical vertices
    std::vector<std::pair<int, int>> edges;         // 36 struts
};

const KelvinWireframe& kelvin_wireframe();

struct KelvinAssemblyInfo {
    int node_count = 0;
    int element_count = 0;
    int clamped_node_count = 0;
    int input_node_count = 0;
    int output_node_count = 0;
};

/// Kelvin cell frame: clamped on the bottom (min-z) face struts, unit x-force
/// spread uniformly over the min-x face nodes, output = mean x-displacement of
/// the max-x face nodes. Clamped DOFs are eliminated.
SecondOrderSystem assemble_kelvin_cell(const KelvinCellGeometry& geometry,
                                       const MaterialSpec& material,
                                       const RayleighDamping& damping,
                                       KelvinAssemblyInfo* info = nullptr);

/// Variant without boundary-condition elimination (all 6 rigid-body modes kept);
/// used by tests that check the unconstrained stiffness null space.
SecondOrderSystem assemble_kelvin_cell_free(const KelvinCellGeometry& geometry,
                                            const MaterialSpec& material,
                                            const RayleighDamping& damping);

}  // namespace romopt::fe
