// SPDX-License-Identifier: Apache-2.0
#include "romopt/fe/beam_element.hpp"

#include <algorithm>
#include <cmath>

namespace romopt::fe {

BeamSection BeamSection::rectangle(double w, double h) {
    BeamSection s;
    s.area = w * h;
    s.inertia_y = w * h * h * h / 12.0;
    s.inertia_z = h * w * w * w / 12.0;
    // Saint-Venant torsion constant of a rectangle, a >= b
    const double a = std::max(w, h);
    const double b = std::min(w, h);
    s.torsion_j = a * b * b * b *
                  (1.0 / 3.0 - 0.21 * (b / a) * (1.0 - b * b * b * b / (12.0 * a * a * a * a)));
    s.polar_ip = s.inertia_y + s.inertia_z;
    s.shear_area_y = 5.0 / 6.0 * s.area;
    s.shear_area_z = 5.0 / 6.0 * s.area;
    return s;
}

namespace {

// DOF indices of the two bending planes. Bending about local z deflects in y
// (DOFs v_i, rz_i, v_j, rz_j), bending about local y deflects in z with the
// opposite rotation sign convention.
constexpr int kBendZ[4] = {1, 5, 7, 11};
constexpr int kBendY[4] = {2, 4, 8, 10};

void add_block(Mat12& A, const int (&idx)[4], const Eigen::Matrix4d& B) {
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) A(idx[a], idx[b]) += B(a, b);
}

}  // namespace

Mat12 timoshenko_stiffness(const BeamSection& s, double E, double G, double length) {
    Mat12 K = Mat12::Zero();
    const double L = length, L2 = L * L, L3 = L2 * L;

    const double ka = E * s.area / L;
    K(0, 0) = K(6, 6) = ka;
    K(0, 6) = K(6, 0) = -ka;

    const double kt = G * s.torsion_j / L;
    K(3, 3) = K(9, 9) = kt;
    K(3, 9) = K(9, 3) = -kt;

    const double phi_z = 12.0 * E * s.inertia_z / (s.shear_area_y * G * L2);
    const double phi_y = 12.0 * E * s.inertia_y / (s.shear_area_z * G * L2);

    auto bending = [&](double I, double phi, double sgn) {
        const double d = 1.0 + phi;
        const double k1 = 12.0 * E * I / (L3 * d);
        const double k2 = sgn * 6.0 * E * I / (L2 * d);
        const double k3 = (4.0 + phi) * E * I / (L * d);
        const double k4 = (2.0 - phi) * E * I / (L * d);
        Eigen::Matrix4d B;
        B << k1, k2, -k1, k2,
             k2, k3, -k2, k4,
            -k1, -k2, k1, -k2,
             k2, k4, -k2, k3;
        return B;
    };
    add_block(K, kBendZ, bending(s.inertia_z, phi_z, +1.0));
    add_block(K, kBendY, bending(s.inertia_y, phi_y, -1.0));
    return K;
}

Mat12 timoshenko_mass(const BeamSection& s, double rho, double E, double G, double length) {
    Mat12 M = Mat12::Zero();
    const double L = length, L2 = L * L;
    const double m = rho * s.area * L;

    M(0, 0) = M(6, 6) = m / 3.0;
    M(0, 6) = M(6, 0) = m / 6.0;

    const double mt = rho * s.polar_ip * L / 6.0;
    M(3, 3) = M(9, 9) = 2.0 * mt;
    M(3, 9) = M(9, 3) = mt;

    const double phi_z = 12.0 * E * s.inertia_z / (s.shear_area_y * G * L2);
    const double phi_y = 12.0 * E * s.inertia_y / (s.shear_area_z * G * L2);

    // Consistent translational mass plus rotary inertia, shear-corrected
    // (Przemieniecki-style coefficients).
    auto bending = [&](double I, double phi, double sgn) {
        const double den = (1.0 + phi) * (1.0 + phi);
        const double c = m / 420.0;
        const double rI = rho * I / (30.0 * L * den);
        const double p2 = phi * phi;
        const double m11 = c * (156.0 + 294.0 * phi + 140.0 * p2) / den + rI * 36.0;
        const double m12 =
            sgn * (c * L * (22.0 + 38.5 * phi + 17.5 * p2) / den + rI * L * (3.0 - 15.0 * phi));
        const double m13 = c * (54.0 + 126.0 * phi + 70.0 * p2) / den - rI * 36.0;
        const double m14 =
            sgn * (-c * L * (13.0 + 31.5 * phi + 17.5 * p2) / den + rI * L * (3.0 - 15.0 * phi));
        const double m22 =
            c * L2 * (4.0 + 7.0 * phi + 3.5 * p2) / den + rI * L2 * (4.0 + 5.0 * phi + 10.0 * p2);
        const double m24 =
            -c * L2 * (3.0 + 7.0 * phi + 3.5 * p2) / den + rI * L2 * (-1.0 - 5.0 * phi + 5.0 * p2);
        Eigen::Matrix4d B;
        B << m11, m12, m13, m14,
             m12, m22, -m14, m24,
             m13, -m14, m11, -m12,
             m14, m24, -m12, m22;
        return B;
    };
    add_block(M, kBendZ, bending(s.inertia_z, phi_z, +1.0));
    add_block(M, kBendY, bending(s.inertia_y, phi_y, -1.0));
    return M;
}

Eigen::Matrix3d beam_rotation(const Eigen::Vector3d& axis) {
    const Eigen::Vector3d ex = axis.normalized();
    Eigen::Vector3d ref = std::abs(ex.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                 : Eigen::Vector3d::UnitY();
    Eigen::Vector3d ey = ref.cross(ex).normalized();
    Eigen::Vector3d ez = ex.cross(ey);
    Eigen::Matrix3d R;
    R.row(0) = ex;
    R.row(1) = ey;
    R.row(2) = ez;
    return R;
}

Mat12 element_transformation(const Eigen::Matrix3d& rot) {
    Mat12 T = Mat12::Zero();
    for (int b = 0; b < 4; ++b) T.block<3, 3>(3 * b, 3 * b) = rot;
    return T;
}

}  // namespace romopt::fe
