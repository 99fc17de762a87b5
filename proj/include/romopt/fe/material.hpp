// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "romopt/errors.hpp"

namespace romopt::fe {

/// Isotropic material. G must be consistent with E and nu.
struct MaterialSpec {
    double density = 0.0;         // kg/m^3
    double youngs_modulus = 0.0;  // N/m^2
    double poisson_ratio = 0.0;   // -
    double shear_modulus = 0.0;   // N/m^2; defaulted from E, nu when <= 0

    static MaterialSpec isotropic(double rho, double E, double nu) {
        MaterialSpec m;
        m.density = rho;
        m.youngs_modulus = E;
        m.poisson_ratio = nu;
        m.shear_modulus = E / (2.0 * (1.0 + nu));
        m.validate();
        return m;
    }

    void validate() const {
        if (!(density > 0.0)) throw InvalidGeometryError("material density must be positive");
        if (!(youngs_modulus > 0.0))
            throw InvalidGeometryError("Young's modulus must be positive");
        if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5))
            throw InvalidGeometryError("Poisson ratio must lie in (0, 0.5)");
        const double g_ref = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
        if (std::abs(shear_modulus - g_ref) > 1e-12 * g_ref)
            throw InvalidGeometryError("shear modulus inconsistent with E/(2(1+nu))");
    }
};

/// Proportional damping C = a*M + b*K.
struct RayleighDamping {
    double mass_coefficient = 0.0;       // 1/s
    double stiffness_coefficient = 0.0;  // s

    void validate() const {
        if (mass_coefficient < 0.0 || stiffness_coefficient < 0.0)
            throw InvalidGeometryError("Rayleigh coefficients must be non-negative");
    }
};

}  // namespace romopt::fe
