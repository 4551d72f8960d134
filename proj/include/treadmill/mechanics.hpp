#pragma once

// Kinematics and residual stress in an incompressible spherical shell
// r0 <= r <= r1 grown on a rigid core of radius r0. Every new layer is
// deposited unstretched at r0 and pushed outward, so the hoop stretch of a
// particle currently at r is r/r0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treadmill/errors.hpp"
#include "treadmill/strain_energy.hpp"

namespace treadmill {

struct ShellGeometry {
    double r0 = 1.0;  // inner (growth) surface
    double r1 = 1.0;  // outer (traction-free) surface

    double nu() const { return r1 / r0; }
    double thickness() const { return r1 - r0; }

    void check() const {
        if (!(r0 > 0.0) || !(r1 >= r0)) {
            throw DomainError("shell geometry requires r1 >= r0 > 0");
        }
    }
};

struct Stretches {
    double radial = 1.0;
    double hoop = 1.0;
};

struct FieldSample {
    double r = 0.0;
    double lambda_r = 1.0;
    double lambda_theta = 1.0;
    double sigma_r = 0.0;
    double sigma_theta = 0.0;
    std::optional<double> v;  // present only when an accretion speed is given
};

/// Current radius of the particle with material coordinate Z, given the
/// material coordinate Z0 of the growth surface: r^3 = r0^3 + 3 r0^2 (Z - Z0).
inline double radius_of_particle(double Z, double Z0, double r0) {
    if (!(r0 > 0.0)) throw DomainError("radius_of_particle: r0 must be positive");
    if (!(Z >= Z0)) throw DomainError("radius_of_particle: particle not in body (Z < Z0)");
    return std::cbrt(r0 * r0 * r0 + 3.0 * r0 * r0 * (Z - Z0));
}

inline Stretches stretches(double r, double r0) {
    if (!(r0 > 0.0) || !(r >= r0)) throw DomainError("stretches: need r >= r0 > 0");
    const double q = r0 / r;
    return {q * q, r / r0};
}

/// Radial particle speed v = V0 (r0/r)^2, V0 being the accretion speed at r0.
inline double velocity(double r, double V0, double r0) {
    if (!(r0 > 0.0) || !(r >= r0)) throw DomainError("velocity: need r >= r0 > 0");
    const double q = r0 / r;
    return V0 * q * q;
}

/// dr1/dt from volume balance r1^2 dr1/dt = r0^2 (V0 + V1).
inline double outer_radius_rate(double r0, double r1, double V0, double V1) {
    if (!(r0 > 0.0) || !(r1 >= r0)) throw DomainError("outer_radius_rate: need r1 >= r0 > 0");
    return r0 * r0 * (V0 + V1) / (r1 * r1);
}

namespace detail {
inline void require_in_shell(double r, const ShellGeometry& geom, const char* what) {
    geom.check();
    if (!(r >= geom.r0 && r <= geom.r1)) {
        throw DomainError(std::string(what) + ": r outside [r0, r1]");
    }
}
}  // namespace detail

/// sigma_r(r) = W(r/r0) - W(r1/r0). Vanishes at r1, equals -W(nu) at r0.
template <ReducedEnergyModel E>
double radial_stress(double r, const ShellGeometry& geom, const E& energy) {
    detail::require_in_shell(r, geom, "radial_stress");
    return eval_w(energy, r / geom.r0) - eval_w(energy, geom.r1 / geom.r0);
}

/// sigma_theta = sigma_r + (1/2)(r/r0) W'(r/r0).
template <ReducedEnergyModel E>
double hoop_stress(double r, const ShellGeometry& geom, const E& energy) {
    const double sr = radial_stress(r, geom, energy);
    const double l = r / geom.r0;
    return sr + 0.5 * l * eval_dw(energy, l);
}

/// n samples uniform in r on [r0, r1], endpoints exact.
template <ReducedEnergyModel E>
std::vector<FieldSample> stress_profile(const ShellGeometry& geom, const E& energy, std::size_t n,
                                        std::optional<double> V0 = std::nullopt) {
    geom.check();
    if (n < 2) throw DomainError("stress_profile: need n >= 2");
    std::vector<FieldSample> out;
    out.reserve(n);
    const double dr = geom.thickness() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double r = geom.r0 + dr * static_cast<double>(i);
        if (i + 1 == n) r = geom.r1;
        r = std::min(r, geom.r1);
        const auto s = stretches(r, geom.r0);
        FieldSample fs;
        fs.r = r;
        fs.lambda_r = s.radial;
        fs.lambda_theta = s.hoop;
        fs.sigma_r = radial_stress(r, geom, energy);
        fs.sigma_theta = hoop_stress(r, geom, energy);
        if (V0) fs.v = velocity(r, *V0, geom.r0);
        out.push_back(fs);
    }
    return out;
}

/// Max over interior grid points of the centred-difference defect in
/// d(sigma_r)/dr = W'(r/r0)/r0. Shrinks like dr^2.
template <ReducedEnergyModel E>
double equilibrium_residual(const ShellGeometry& geom, const E& energy, std::size_t n) {
    if (n < 3) throw DomainError("equilibrium_residual: need n >= 3");
    geom.check();
    if (geom.r1 == geom.r0) return 0.0;
    const auto samples = stress_profile(geom, energy, n);
    const double dr = geom.thickness() / static_cast<double>(n - 1);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double slope = (samples[i + 1].sigma_r - samples[i - 1].sigma_r) / (2.0 * dr);
        const double exact = eval_dw(energy, samples[i].r / geom.r0) / geom.r0;
        worst = std::max(worst, std::abs(slope - exact));
    }
    return worst;
}

}  // namespace treadmill
