// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "romopt/fe/second_order_system.hpp"

namespace romopt::fe {

/// Cantilever beam along x, rectangular cross-section.
struct BeamGeometry {
    double length = 0.0;     // l (m)
    double thickness = 0.0;  // t (m), section width in y
    double height = 0.0;     // h (m), section depth in z
    int element_count = 0;   // N

    void validate() const {
        if (!(length > 0.0) || !(thickness > 0.0) || !(height > 0.0))
            throw InvalidGeometryError("beam dimensions must be positive");
        if (element_count < 1) throw InvalidGeometryError("element_count must be >= 1");
    }
};

/// Clamped cantilever with a transverse (z) unit tip force as input and the
/// transverse tip displacement as output. The clamped node's 6 DOFs are
/// eliminated, leaving n = 6*N free DOFs.
SecondOrderSystem assemble_timoshenko_beam(const BeamGeometry& geometry,
                                           const MaterialSpec& material,
                                           const RayleighDamping& damping);

}  // namespace romopt::fe
