#pragma once

// Steady treadmilling of a solid accreting on a rigid sphere: material is
// added at r0 at speed V0 and removed at r1 at the same rate, so the shell
// geometry is fixed while material flows through it.
//
// Unknowns (nu = r1/r0, V0, mu0) satisfy
//   rhoR V0 = M (mu_inf - mu0) / (r1 - r0) * r1 / r0      (supply by diffusion)
//   b0 V0   = (mu0 - muR0) rhoR - W(nu)                    (kinetics at r0)
//   b1 V0   = -(mu_inf - muR1) rhoR + W(nu)                (kinetics at r1)
// which reduce to one scalar equation g_eta(nu) = h(nu) with
//   g_eta(l) = V* / (1 + eta (1 - 1/l)),   h(l) = V** + W(l)/b1.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treadmill/diffusion.hpp"
#include "treadmill/errors.hpp"
#include "treadmill/root_finding.hpp"
#include "treadmill/strain_energy.hpp"

namespace treadmill {

struct ModelParams {
    ReducedEnergy energy;
    double b0 = 1.0;    // kinetic modulus at the accreting surface
    double b1 = 1.0;    // kinetic modulus at the ablating surface
    double muR0 = 0.0;  // referential chemical potential of bound material at r0
    double muR1 = 1.0;  // ... and at r1
    double mu_inf = 1.0;
    double rhoR = 1.0;
    double M = 1.0;  // mobility inside the solid
    double r0 = 1.0;

    void check() const {
        const bool finite = std::isfinite(b0) && std::isfinite(b1) && std::isfinite(muR0) &&
                            std::isfinite(muR1) && std::isfinite(mu_inf) && std::isfinite(rhoR) &&
                            std::isfinite(M) && std::isfinite(r0);
        if (!finite) throw DomainError("model parameters must be finite");
        if (!(b0 > 0.0 && b1 > 0.0 && rhoR > 0.0 && M > 0.0 && r0 > 0.0)) {
            throw DomainError("model parameters require b0, b1, rhoR, M, r0 > 0");
        }
    }
};

struct Scales {
    double Vstar = 0.0;      // (muR1 - muR0) rhoR / (b0 + b1)
    double Vstarstar = 0.0;  // (muR1 - mu_inf) rhoR / b1
    double ellStar = 0.0;    // (b0 + b1) M / rhoR^2
    double muStar = 0.0;     // (b0 muR1 + b1 muR0) / (b0 + b1)
    double eta = 0.0;        // r0 / ellStar
};

inline Scales compute_scales(const ModelParams& p) {
    p.check();
    Scales s;
    const double b = p.b0 + p.b1;
    s.Vstar = (p.muR1 - p.muR0) * p.rhoR / b;
    s.Vstarstar = (p.muR1 - p.mu_inf) * p.rhoR / p.b1;
    s.ellStar = b * p.M / (p.rhoR * p.rhoR);
    s.muStar = (p.b0 * p.muR1 + p.b1 * p.muR0) / b;
    s.eta = p.r0 / s.ellStar;
    return s;
}

/// Copy of `p` with the bead radius set so that r0 / ellStar == eta.
inline ModelParams with_eta(ModelParams p, double eta) {
    if (!(eta > 0.0)) throw DomainError("with_eta: eta must be positive");
    p.r0 = eta * compute_scales(p).ellStar;
    return p;
}

struct Solvability {
    Violation violation = Violation::none;

    bool ok() const { return violation == Violation::none; }
    explicit operator bool() const { return ok(); }
    std::string reason() const { return describe(violation); }
};

/// A treadmilling state exists (and is then unique) iff V* > 0 and V* > V**,
/// equivalently muR1 > muR0 and mu_inf > mu*.
inline Solvability solvable(const ModelParams& p) {
    const Scales s = compute_scales(p);
    if (!(s.Vstar > 0.0)) return {Violation::accretion_speed_nonpositive};
    if (!(s.Vstar > s.Vstarstar)) return {Violation::speed_order};
    return {};
}

/// g_eta(lambda): accretion speed the diffusive supply can sustain for a
/// shell of stretch ratio lambda.
inline double supply_velocity(double eta, double lambda, double Vstar) {
    if (!(lambda >= 1.0)) throw DomainError("supply_velocity: lambda < 1");
    if (!(eta >= 0.0)) throw DomainError("supply_velocity: eta < 0");
    return Vstar / (1.0 + eta * (1.0 - 1.0 / lambda));
}

/// h(lambda): accretion speed the ablation kinetics at r1 demand.
template <ReducedEnergyModel E>
double kinetic_velocity(double lambda, double Vstarstar, double b1, const E& energy) {
    if (!(lambda >= 1.0)) throw DomainError("kinetic_velocity: lambda < 1");
    return Vstarstar + eval_w(energy, lambda) / b1;
}

struct TreadmillState {
    double nu = 1.0;
    double r1 = 0.0;
    double d = 0.0;
    double V0 = 0.0;
    double V1 = 0.0;
    double mu0 = 0.0;
    double mu1 = 0.0;
    double f0 = 0.0;
    double f1 = 0.0;
};

namespace detail {

// Root in s = nu - 1 of the nondimensional balance
//   1 / (1 + eta s/(1+s)) = V**/V* + W(1+s) / (b1 V*),
// which is positive at s = 0 and tends to -inf as s grows.
inline double solve_stretch_excess(const ModelParams& p, const Scales& sc) {
    const double ratio = sc.Vstarstar / sc.Vstar;
    const double wscale = p.b1 * sc.Vstar;
    auto F = [&](double s) {
        const double t = s / (1.0 + s);
        return 1.0 / (1.0 + sc.eta * t) - ratio - p.energy.w(1.0 + s) / wscale;
    };
    const double hi = roots::expand_upper(F, 0.0, 1e-3, 1e9 - 1.0);
    const auto root = roots::brent(F, 0.0, hi, {0.0, 1e-12});
    if (!root.converged) throw NumericFailure("treadmill solve did not converge");
    return root.x;
}

// nu > 1 with W(nu) = level, level > 0.
template <ReducedEnergyModel E>
double energy_level_root(const E& energy, double level) {
    if (!(level > 0.0)) throw DomainError("energy level must be positive");
    auto F = [&](double s) { return energy.w(1.0 + s) - level; };
    const double hi = roots::expand_upper(F, 0.0, 1e-3, 1e9 - 1.0);
    const auto root = roots::brent(F, 0.0, hi, {0.0, 1e-14});
    if (!root.converged) throw NumericFailure("energy level root did not converge");
    return 1.0 + root.x;
}

}  // namespace detail

/// The unique treadmilling state. Throws NoTreadmillingState when the
/// existence conditions fail.
inline TreadmillState solve(const ModelParams& p) {
    const Solvability ok = solvable(p);
    if (!ok) throw NoTreadmillingState(ok.violation);
    const Scales sc = compute_scales(p);

    const double s = detail::solve_stretch_excess(p, sc);
    const double t = s / (1.0 + s);  // 1 - 1/nu
    const double et = sc.eta * t;

    TreadmillState st;
    st.nu = 1.0 + s;
    st.r1 = st.nu * p.r0;
    st.d = s * p.r0;
    // Evaluated on the supply side: equal to V** + W(nu)/b1 at the root, but
    // free of cancellation when V0 << |V**|.
    st.V0 = sc.Vstar / (1.0 + et);
    st.V1 = -st.V0;
    // mu_inf - mu0 = (b0 + b1)(V* - V0)/rhoR with V* - V0 = V* et/(1 + et).
    st.mu0 = p.mu_inf - (p.b0 + p.b1) / p.rhoR * sc.Vstar * (et / (1.0 + et));
    st.mu1 = p.mu_inf;
    st.f0 = p.b0 * st.V0;
    st.f1 = p.b1 * st.V1;
    return st;
}

/// Driving forces computed from the chemistry and stored energy,
/// f0 = (mu0 - muR0) rhoR - W(nu),  f1 = (mu1 - muR1) rhoR - W(nu).
/// At a solution these equal b0 V0 and b1 V1.
struct DrivingForces {
    Residual f0;  // value = chemical f0, scale = magnitude of its terms
    Residual f1;
};

inline DrivingForces driving_forces(const TreadmillState& st, const ModelParams& p) {
    const double W = eval_w(p.energy, st.nu);
    DrivingForces out;
    out.f0.value = (st.mu0 - p.muR0) * p.rhoR - W;
    out.f0.scale = (std::abs(st.mu0) + std::abs(p.muR0)) * p.rhoR + W;
    out.f1.value = (st.mu1 - p.muR1) * p.rhoR - W;
    out.f1.scale = (std::abs(st.mu1) + std::abs(p.muR1)) * p.rhoR + W;
    return out;
}

/// Residuals of the three-equation treadmilling system at `st`.
inline std::array<Residual, 3> system_residuals(const TreadmillState& st, const ModelParams& p) {
    const double W = eval_w(p.energy, st.nu);
    const double k = p.M / st.d * (st.r1 / p.r0);
    std::array<Residual, 3> r;
    r[0].value = p.rhoR * st.V0 - k * (p.mu_inf - st.mu0);
    r[0].scale = p.rhoR * std::abs(st.V0) + k * (std::abs(p.mu_inf) + std::abs(st.mu0));
    r[1].value = p.b0 * st.V0 - ((st.mu0 - p.muR0) * p.rhoR - W);
    r[1].scale = p.b0 * std::abs(st.V0) + (std::abs(st.mu0) + std::abs(p.muR0)) * p.rhoR + W;
    r[2].value = p.b1 * st.V0 - (-(p.mu_inf - p.muR1) * p.rhoR + W);
    r[2].scale = p.b1 * std::abs(st.V0) + (std::abs(p.mu_inf) + std::abs(p.muR1)) * p.rhoR + W;
    return r;
}

/// Closed-form diffusion profiles around a treadmilling state (V1 = -V0, no
/// flux outside the solid). M_outer does not enter the state itself.
inline SteadyProfiles profiles_of(const TreadmillState& st, const ModelParams& p, double M_outer) {
    SteadyProfiles pr;
    pr.r0 = p.r0;
    pr.r1 = st.r1;
    pr.V0 = st.V0;
    pr.V1 = st.V1;
    pr.mu0 = st.mu0;
    pr.transport = {p.M, M_outer, p.rhoR, p.mu_inf};
    return pr;
}

inline InterfaceState interface_state_of(const TreadmillState& st) {
    return {st.r1, st.V0, st.V1, st.mu0, st.mu1};
}

// ---------------------------------------------------------------------------
// Independent check of existence and uniqueness by brute-force scanning.

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct OracleReport {
    std::vector<Bracket> brackets;
    double lam_max = 0.0;
    std::size_t points = 0;

    bool consistent() const { return brackets.size() == 1; }
};

/// Scans F(l) = g_eta(l) - h(l) at l = 1 and at n points with l - 1
/// geometrically spaced on [1e-14, lam_max - 1]; records every interval on
/// which F changes sign. Works directly from supply_velocity and
/// kinetic_velocity, not from the solver.
inline OracleReport grid_scan_oracle(const ModelParams& p, double lam_max, std::size_t n) {
    const Solvability ok = solvable(p);
    if (!ok) throw NoTreadmillingState(ok.violation);
    if (!(lam_max > 1.0) || n < 100) throw DomainError("grid_scan_oracle: need lam_max > 1, n >= 100");
    const Scales sc = compute_scales(p);
    auto F = [&](double l) {
        return supply_velocity(sc.eta, l, sc.Vstar) - kinetic_velocity(l, sc.Vstarstar, p.b1, p.energy);
    };
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

    OracleReport rep;
    rep.lam_max = lam_max;
    rep.points = n;
    const double s_min = std::min(1e-14, 0.5 * (lam_max - 1.0));
    const auto excess = log_grid(s_min, lam_max - 1.0, n);
    double prev_l = 1.0;
    int prev_sign = sign(F(1.0));
    for (double s : excess) {
        const double l = 1.0 + s;
        const int cur = sign(F(l));
        if (cur == 0) {
            rep.brackets.push_back({l, l});
        } else if (prev_sign != 0 && cur != prev_sign) {
            rep.brackets.push_back({prev_l, l});
        }
        prev_l = l;
        prev_sign = cur;
    }
    return rep;
}

/// Smallest lam_max = 1 + 2^k with F(lam_max) < 0, for use with the oracle.
inline double oracle_upper_stretch(const ModelParams& p) {
    const Scales sc = compute_scales(p);
    double s = 1.0;
    while (s < 1e9) {
        const double l = 1.0 + s;
        if (supply_velocity(sc.eta, l, sc.Vstar) - kinetic_velocity(l, sc.Vstarstar, p.b1, p.energy) < 0.0) {
            return l;
        }
        s *= 2.0;
    }
    throw NumericFailure("oracle_upper_stretch: no sign change below lambda = 1e9");
}

// ---------------------------------------------------------------------------
// Limits in the bead radius.

struct SmallBeadLimit {
    double nu_star = 1.0;    // W(nu_star)/b1 = V* - V**
    double V0_limit = 0.0;   // = V*
    double mu0_limit = 0.0;  // = mu_inf
};

/// eta -> 0 (stress-limited): thickness tends to (nu_star - 1) r0.
inline SmallBeadLimit small_bead_asymptote(const ModelParams& p) {
    const Solvability ok = solvable(p);
    if (!ok) throw NoTreadmillingState(ok.violation);
    const Scales sc = compute_scales(p);
    SmallBeadLimit out;
    out.nu_star = detail::energy_level_root(p.energy, p.b1 * (sc.Vstar - sc.Vstarstar));
    out.V0_limit = sc.Vstar;
    out.mu0_limit = p.mu_inf;
    return out;
}

/// d/r0 from the quadratic expansion of W about 1:
/// sqrt(2 (mu_inf - mu*) rhoR / W''(1)). Accepts mu_inf == mu* (gives 0).
inline double small_bead_quadratic(const ModelParams& p) {
    const Scales sc = compute_scales(p);
    if (!(sc.Vstar > 0.0)) throw NoTreadmillingState(Violation::accretion_speed_nonpositive);
    const double drive = p.mu_inf - sc.muStar;
    if (drive < 0.0) throw NoTreadmillingState(Violation::speed_order);
    const double curvature = eval_d2w(p.energy, 1.0);
    if (!(curvature > 0.0)) throw DomainError("small_bead_quadratic: W''(1) must be positive");
    return std::sqrt(2.0 * drive * p.rhoR / curvature);
}

enum class LargeBeadRegime {
    diffusion_limited,  // V** > 0: shell thins like 1/eta, V0 -> V**
    marginal,           // V** == 0: no thickness estimate
    finite_thickness,   // V** < 0: nu -> nu_**, V0 ~ 1/eta
};

struct LargeBeadEstimate {
    LargeBeadRegime regime = LargeBeadRegime::diffusion_limited;
    std::optional<double> d_over_r0;
    double V0 = 0.0;
    double mu0_limit = 0.0;
    std::optional<double> nu_starstar;
};

/// Thickness in the diffusion-limited regime, written with chemical
/// potentials: (mu_inf - mu*) / (muR1 - mu_inf) / eta. Empty unless V** > 0.
inline std::optional<double> diffusion_limited_thickness(const ModelParams& p, double eta) {
    const Scales sc = compute_scales(p);
    if (!(sc.Vstarstar > 0.0) || !(eta > 0.0)) return std::nullopt;
    return (p.mu_inf - sc.muStar) / (p.muR1 - p.mu_inf) / eta;
}

/// eta -> infinity estimates, branching on the sign of V**.
inline LargeBeadEstimate large_bead_asymptote(const ModelParams& p, double eta) {
    const Solvability ok = solvable(p);
    if (!ok) throw NoTreadmillingState(ok.violation);
    if (!(eta > 0.0)) throw DomainError("large_bead_asymptote: eta must be positive");
    const Scales sc = compute_scales(p);
    LargeBeadEstimate out;
    if (sc.Vstarstar >= 0.0) {
        out.regime = sc.Vstarstar > 0.0 ? LargeBeadRegime::diffusion_limited : LargeBeadRegime::marginal;
        if (sc.Vstarstar > 0.0) out.d_over_r0 = (sc.Vstar / sc.Vstarstar - 1.0) / eta;
        out.V0 = sc.Vstarstar;
        out.mu0_limit = p.mu_inf + (p.b0 + p.b1) * (sc.Vstarstar - sc.Vstar) / p.rhoR;
    } else {
        out.regime = LargeBeadRegime::finite_thickness;
        const double nu = detail::energy_level_root(p.energy, -p.b1 * sc.Vstarstar);
        out.nu_starstar = nu;
        out.d_over_r0 = nu - 1.0;
        out.V0 = sc.Vstar / (1.0 - 1.0 / nu) / eta;
        out.mu0_limit = p.mu_inf + p.muR0 - p.muR1;
    }
    return out;
}

}  // namespace treadmill
