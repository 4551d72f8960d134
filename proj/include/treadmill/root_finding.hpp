#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "treadmill/errors.hpp"

namespace treadmill::roots {

struct Tolerance {
    double absolute = 0.0;
    double relative = 1e-12;
};

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Brent's method (zeroin): inverse quadratic / secant steps safeguarded by
/// bisection. Requires f(a) and f(b) of opposite sign (or one of them zero).
/// Stops once the bracket half-width is below
/// 2 eps |x| + (absolute + relative |x|) / 2.
template <class F>
RootResult brent(F&& f, double a, double b, Tolerance tol = {}, std::size_t max_iter = 500) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, 0, true};
    if (fb == 0.0) return {b, fb, 0, true};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw NumericFailure("brent: root not bracketed");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * (tol.absolute + tol.relative * std::abs(b));
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0) {
            return {b, fb, iter, true};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return {b, fb, max_iter, false};
}

/// Starting from `step`, doubles the step until f(lo + step) changes sign
/// relative to f(lo). Returns the bracketing upper end. Throws
/// NumericFailure once lo + step exceeds `limit`.
template <class F>
double expand_upper(F&& f, double lo, double step, double limit) {
    const bool lo_positive = f(lo) > 0.0;
    while (lo + step <= limit) {
        const double fx = f(lo + step);
        if (fx == 0.0 || (fx > 0.0) != lo_positive) return lo + step;
        step *= 2.0;
    }
    throw NumericFailure("bracket expansion exceeded limit");
}

}  // namespace treadmill::roots
