#pragma once

// Reduced strain energies W(lambda) for isochoric equi-biaxial stretch,
// i.e. principal stretches (lambda^-2, lambda, lambda).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "treadmill/errors.hpp"

namespace treadmill {

/// Anything exposing W, W' and W'' plus a characteristic stress used to
/// normalise stresses and tolerances (the shear modulus for neo-Hookean).
template <class E>
concept ReducedEnergyModel = requires(const E& e, double lambda) {
    { e.w(lambda) } -> std::convertible_to<double>;
    { e.dw(lambda) } -> std::convertible_to<double>;
    { e.d2w(lambda) } -> std::convertible_to<double>;
    { e.stress_scale() } -> std::convertible_to<double>;
};

namespace detail {
inline void require_positive_stretch(double lambda) {
    if (!(lambda > 0.0)) {
        throw DomainError("stretch must be positive, got " + std::to_string(lambda));
    }
}
}  // namespace detail

template <ReducedEnergyModel E>
double eval_w(const E& energy, double lambda) {
    detail::require_positive_stretch(lambda);
    return energy.w(lambda);
}

template <ReducedEnergyModel E>
double eval_dw(const E& energy, double lambda) {
    detail::require_positive_stretch(lambda);
    return energy.dw(lambda);
}

template <ReducedEnergyModel E>
double eval_d2w(const E& energy, double lambda) {
    detail::require_positive_stretch(lambda);
    return energy.d2w(lambda);
}

/// W(lambda) = (G/2)(lambda^-4 + 2 lambda^2 - 3).
struct NeoHookean {
    double G = 1.0;

    // Factored as (G/2)(lambda^2-1)^2(2 lambda^2+1)/lambda^4 so that W stays
    // accurate for lambda close to one.
    double w(double lambda) const {
        const double l2 = lambda * lambda;
        const double a = l2 - 1.0;
        return 0.5 * G * a * a * (2.0 * l2 + 1.0) / (l2 * l2);
    }
    double dw(double lambda) const { return 2.0 * G * (lambda - std::pow(lambda, -5)); }
    double d2w(double lambda) const { return 2.0 * G * (1.0 + 5.0 * std::pow(lambda, -6)); }
    double stress_scale() const { return G; }
};

/// Mooney-Rivlin, What = C1 (I1 - 3) + C2 (I2 - 3), reduced to
/// W(lambda) = C1 (lambda^-4 + 2 lambda^2 - 3) + C2 (2 lambda^-2 + lambda^4 - 3).
/// C1 = G/2, C2 = 0 recovers NeoHookean.
struct MooneyRivlin {
    double C1 = 0.5;
    double C2 = 0.0;

    double w(double lambda) const {
        const double l2 = lambda * lambda;
        const double a = l2 - 1.0;
        return a * a * (C1 * (2.0 * l2 + 1.0) / (l2 * l2) + C2 * (l2 + 2.0) / l2);
    }
    double dw(double lambda) const {
        return 4.0 * C1 * (lambda - std::pow(lambda, -5)) +
               4.0 * C2 * (lambda * lambda * lambda - std::pow(lambda, -3));
    }
    double d2w(double lambda) const {
        return C1 * (4.0 + 20.0 * std::pow(lambda, -6)) +
               C2 * (12.0 * lambda * lambda + 12.0 * std::pow(lambda, -4));
    }
    // Equivalent small-strain shear modulus, W''(1) / 12.
    double stress_scale() const { return 2.0 * (C1 + C2); }
};

/// Type-erased reduced energy. Holds any ReducedEnergyModel, or three
/// user-supplied callables. Nothing is validated at construction so that
/// pathological energies can be exercised; see validate().
class ReducedEnergy {
public:
    using Fn = std::function<double(double)>;

    ReducedEnergy() : ReducedEnergy("neo_hookean", NeoHookean{}) {}

    ReducedEnergy(std::string name, Fn w, Fn dw, Fn d2w, double stress_scale)
        : name_(std::move(name)),
          w_(std::move(w)),
          dw_(std::move(dw)),
          d2w_(std::move(d2w)),
          stress_scale_(stress_scale) {}

    template <ReducedEnergyModel E>
        requires(!std::same_as<std::remove_cvref_t<E>, ReducedEnergy>)
    ReducedEnergy(std::string name, E model)
        : name_(std::move(name)),
          w_([model](double l) { return model.w(l); }),
          dw_([model](double l) { return model.dw(l); }),
          d2w_([model](double l) { return model.d2w(l); }),
          stress_scale_(model.stress_scale()) {}

    double w(double lambda) const { return w_(lambda); }
    double dw(double lambda) const { return dw_(lambda); }
    double d2w(double lambda) const { return d2w_(lambda); }
    double stress_scale() const { return stress_scale_; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    Fn w_;
    Fn dw_;
    Fn d2w_;
    double stress_scale_;
};

inline ReducedEnergy neo_hookean(double G) { return ReducedEnergy("neo_hookean", NeoHookean{G}); }

inline ReducedEnergy mooney_rivlin(double C1, double C2) {
    return ReducedEnergy("mooney_rivlin", MooneyRivlin{C1, C2});
}

// ---------------------------------------------------------------------------
// Structural checks on W over a sampled stretch range.

struct EnergyCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct EnergyValidationReport {
    std::vector<EnergyCheck> checks;

    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }

    const EnergyCheck* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

/// n points, geometrically spaced on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> grid(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

/// Checks, on an n-point log grid over [lambda_min, lambda_max]:
///   normalization          W(1) = W'(1) = 0
///   sign_condition         W'(l) (l - 1) > 0
///   positivity             W(l) > 0 for l != 1
///   growth                 W increasing on [1, lambda_max], W(lambda_max) > W(1) + scale
///   derivative_consistency W' and W'' against central differences
template <ReducedEnergyModel E>
EnergyValidationReport validate(const E& energy, double lambda_min, double lambda_max, std::size_t n) {
    if (!(lambda_min > 0.0 && lambda_min < 1.0 && lambda_max > 1.0) || n < 3) {
        throw DomainError("validate: need 0 < lambda_min < 1 < lambda_max and n >= 3");
    }
    const double scale = energy.stress_scale();
    const auto grid = log_grid(lambda_min, lambda_max, n);
    EnergyValidationReport report;

    auto fail = [](EnergyCheck& c, std::string detail) {
        if (c.passed) {
            c.passed = false;
            c.detail = std::move(detail);
        }
    };

    EnergyCheck norm{"normalization", true, {}};
    if (!(std::abs(energy.w(1.0)) <= 1e-12 * scale)) fail(norm, "W(1) != 0");
    if (!(std::abs(energy.dw(1.0)) <= 1e-10 * scale)) fail(norm, "W'(1) != 0");
    report.checks.push_back(norm);

    EnergyCheck sign{"sign_condition", true, {}};
    EnergyCheck pos{"positivity", true, {}};
    for (double l : grid) {
        if (std::abs(l - 1.0) < 1e-8) continue;
        if (!(energy.dw(l) * (l - 1.0) > 0.0)) {
            fail(sign, "W'(l)(l-1) <= 0 at l=" + std::to_string(l));
        }
        if (!(energy.w(l) > 0.0)) fail(pos, "W(l) <= 0 at l=" + std::to_string(l));
    }
    report.checks.push_back(sign);
    report.checks.push_back(pos);

    EnergyCheck growth{"growth", true, {}};
    double prev = energy.w(1.0);
    for (double l : grid) {
        if (l <= 1.0) continue;
        const double cur = energy.w(l);
        if (!(cur > prev)) fail(growth, "W not increasing at l=" + std::to_string(l));
        prev = cur;
    }
    if (!(energy.w(lambda_max) > energy.w(1.0) + scale)) {
        fail(growth, "W(lambda_max) does not exceed W(1) + stress scale");
    }
    report.checks.push_back(growth);

    EnergyCheck fd{"derivative_consistency", true, {}};
    for (double l : grid) {
        const double h = 1e-4 * l;
        const double dw_fd = (energy.w(l + h) - energy.w(l - h)) / (2.0 * h);
        const double d2w_fd = (energy.dw(l + h) - energy.dw(l - h)) / (2.0 * h);
        const double dw = energy.dw(l);
        const double d2w = energy.d2w(l);
        if (!(std::abs(dw - dw_fd) <= 1e-6 * std::max(std::abs(dw), scale))) {
            fail(fd, "W' disagrees with finite difference at l=" + std::to_string(l));
        }
        if (!(std::abs(d2w - d2w_fd) <= 1e-6 * std::max(std::abs(d2w), scale))) {
            fail(fd, "W'' disagrees with finite difference at l=" + std::to_string(l));
        }
    }
    report.checks.push_back(fd);

    return report;
}

}  // namespace treadmill
