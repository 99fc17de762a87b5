// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace romopt::fe {

/// Cross-section properties of a 3D beam element.
struct BeamSection {
    double area = 0.0;        // A
    double inertia_y = 0.0;   // Iy, bending about local y (deflection in local z)
    double inertia_z = 0.0;   // Iz, bending about local z (deflection in local y)
    double torsion_j = 0.0;   // Saint-Venant torsion constant
    double polar_ip = 0.0;    // Iy + Iz, rotary inertia about the axis
    double shear_area_y = 0.0;
    double shear_area_z = 0.0;

    /// Rectangular section of width (local y) w and height (local z) h,
    /// shear correction factor 5/6.
    static BeamSection rectangle(double w, double h);
};

using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Local stiffness matrix of a 2-node, 6-DOF-per-node Timoshenko beam element.
/// DOF order per node: [ux, uy, uz, rx, ry, rz]; the axis is local x.
Mat12 timoshenko_stiffness(const BeamSection& s, double E, double G, double length);

/// Consistent mass matrix (translational + rotary inertia), same DOF order.
Mat12 timoshenko_mass(const BeamSection& s, double rho, double E, double G, double length);

/// Rotation matrix whose rows are the local axes for a beam along `axis`.
/// The roll orientation is fixed by a deterministic reference vector; for the
/// doubly symmetric sections used here it has no physical effect.
Eigen::Matrix3d beam_rotation(const Eigen::Vector3d& axis);

/// Expand a 3x3 rotation to the 12x12 element transformation.
Mat12 element_transformation(const Eigen::Matrix3d& rot);

}  // namespace romopt::fe
