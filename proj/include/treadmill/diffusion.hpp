#pragma once

// Steady radial diffusion of free particles around the grown shell. Fick's
// law h = -M dmu/dr with mobility M_inner in r0 < r < r1 and M_outer beyond,
// div h = 0, and mu -> mu_inf far away.

#include <cmath>

#include "treadmill/errors.hpp"

namespace treadmill {

struct TransportParams {
    double M_inner = 1.0;
    double M_outer = 1.0;
    double rhoR = 1.0;
    double mu_inf = 0.0;

    void check() const {
        if (!(M_inner > 0.0) || !(M_outer > 0.0) || !(rhoR > 0.0)) {
            throw DomainError("transport parameters require M_inner, M_outer, rhoR > 0");
        }
    }
};

/// Which one-sided limit to take where the flux jumps (r = r1).
enum class Side { below, above };

/// Residual of a balance equation together with the magnitude of the terms
/// that were subtracted to form it, so callers can judge it relative to
/// the rounding level of its inputs.
struct Residual {
    double value = 0.0;
    double scale = 0.0;

    double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

/// h(r) = -rhoR V0 (r0/r)^2 inside the solid, -rhoR (V0+V1)(r0/r)^2 outside.
inline double flux(double r, double V0, double V1, double r0, double r1, double rhoR,
                   Side side = Side::below) {
    if (!(r0 > 0.0) || !(r1 >= r0)) throw DomainError("flux: need r1 >= r0 > 0");
    if (!(r >= r0)) throw DomainError("flux: r < r0");
    const double q = r0 / r;
    const bool outside = r > r1 || (r == r1 && side == Side::above);
    const double h = -rhoR * (outside ? V0 + V1 : V0) * q * q;
    return h == 0.0 ? 0.0 : h;  // no "-0" in output
}

/// Closed-form steady profiles for a given interface state.
struct SteadyProfiles {
    double r0 = 1.0;
    double r1 = 1.0;
    double V0 = 0.0;
    double V1 = 0.0;
    double mu0 = 0.0;
    TransportParams transport;

    double flux(double r, Side side = Side::below) const {
        return treadmill::flux(r, V0, V1, r0, r1, transport.rhoR, side);
    }

    /// mu0 + (rhoR r0 V0 / M_inner)(1 - r0/r) on [r0, r1);
    /// mu_inf - (rhoR (V0+V1) / M_outer) r0^2 / r on [r1, inf).
    double chemical_potential(double r) const {
        if (!(r >= r0)) throw DomainError("chemical_potential: r < r0");
        if (r < r1) {
            return mu0 + transport.rhoR * r0 * V0 / transport.M_inner * (1.0 - r0 / r);
        }
        return transport.mu_inf - transport.rhoR * (V0 + V1) / transport.M_outer * r0 * r0 / r;
    }
};

inline double chemical_potential(double r, const SteadyProfiles& profiles) {
    return profiles.chemical_potential(r);
}

/// Unknowns entering the two continuity conditions at r1.
struct InterfaceState {
    double r1 = 1.0;
    double V0 = 0.0;
    double V1 = 0.0;
    double mu0 = 0.0;
    double mu1 = 0.0;
};

struct InterfaceResiduals {
    Residual inner;  // rhoR V0 = M_inner (mu1 - mu0)/(r1 - r0) * r1/r0
    Residual outer;  // rhoR (V0 + V1) = M_outer (mu_inf - mu1) * r1/r0^2
};

inline InterfaceResiduals interface_residuals(const InterfaceState& s, const TransportParams& tp,
                                              double r0) {
    if (!(r0 > 0.0) || !(s.r1 > r0)) throw DomainError("interface_residuals: need r1 > r0 > 0");
    const double k_in = tp.M_inner / (s.r1 - r0) * (s.r1 / r0);
    const double k_out = tp.M_outer * s.r1 / (r0 * r0);
    InterfaceResiduals out;
    out.inner.value = tp.rhoR * s.V0 - k_in * (s.mu1 - s.mu0);
    out.inner.scale = tp.rhoR * std::abs(s.V0) + k_in * (std::abs(s.mu1) + std::abs(s.mu0));
    out.outer.value = tp.rhoR * (s.V0 + s.V1) - k_out * (tp.mu_inf - s.mu1);
    out.outer.scale =
        tp.rhoR * (std::abs(s.V0) + std::abs(s.V1)) + k_out * (std::abs(tp.mu_inf) + std::abs(s.mu1));
    return out;
}

}  // namespace treadmill
