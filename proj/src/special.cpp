#include "qiso/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qiso/errors.hpp"

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this.threshold the direct forms of seg_area_ratio and cap_weight
// lose all digits to cancellation (numerator and denominator are O(t^3)).
constexpr double kSeriesCut = 1e-4;

// sin(t) - t cos(t) = t^3/3 - t^5/30 + t^7/840 - ...
double sin_minus_tcos(double t) {
    if (std::abs(t) < kSeriesCut) {
        const double t2 = t * t;
        return t * t2 * (1.0 / 3.0 + t2 * (-1.0 / 30.0 + t2 / 840.0));
    }
    return std::sin(t) - t * std::cos(t);
}

}  // namespace

double t_over_sin(double t) {
    if (std::abs(t) < kSeriesCut) {
        const double t2 = t * t;
        return 1.0 + t2 * (1.0 / 6.0 + t2 * 7.0 / 360.0);
    }
    return t / std::sin(t);
}

double seg_area(Angle t) {
    if (!std::isfinite(t)) throw domain_error("seg_area: non-finite argument");
    if (std::abs(t) < kSeriesCut) {
        // t - sin(t)cos(t) = 2t^3/3 - 2t^5/15 + 4t^7/315 - ...
        const double t2 = t * t;
        return t * t2 * (2.0 / 3.0 + t2 * (-2.0 / 15.0 + t2 * 4.0 / 315.0));
    }
    return t - std::sin(t) * std::cos(t);
}

double seg_area_ratio(Angle t) {
    if (!std::isfinite(t) || std::abs(t) >= kPi)
        throw domain_error("seg_area_ratio: argument outside (-pi, pi)");
    if (std::abs(t) < kSeriesCut) {
        const double t2 = t * t;
        return t * (2.0 / 3.0 + t2 * (4.0 / 45.0 + t2 * 4.0 / 315.0));
    }
    const double s = std::sin(t);
    return seg_area(t) / (s * s);
}

Angle seg_angle(double y) {
    if (!std::isfinite(y)) throw domain_error("seg_angle: non-finite argument");
    if (y == 0.0) return 0.0;
    const double sign = y < 0.0 ? -1.0 : 1.0;
    const double ya = std::abs(y);

    // Initial guess from the small-t series (h ~ 2t/3) or from the blow-up
    // h(pi - s) ~ pi/s^2 near the right endpoint.
    double t = ya < 0.5 ? 1.5 * ya : kPi - std::sqrt(kPi / ya);
    double lo = 0.0, hi = kPi;
    t = std::clamp(t, 1e-300, kPi - 1e-12);

    const double tol = 1e-13 * std::max(1.0, ya);
    for (int it = 0; it < 200; ++it) {
        const double f = seg_area_ratio(t) - ya;
        if (std::abs(f) <= tol) return sign * t;
        if (f > 0.0) hi = t; else lo = t;
        const double s = std::sin(t);
        const double dh = 2.0 * sin_minus_tcos(t) / (s * s * s);
        double next = t - f / dh;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == t) return sign * t;  // step underflow, done
        t = next;
    }
    // Newton plus bisection on a strictly monotone function; reaching the
    // cap means the tolerance is unattainable at this magnitude.
    if (std::abs(seg_area_ratio(t) - ya) <= 1e-9 * std::max(1.0, ya)) return sign * t;
    throw numeric_error("seg_angle: no convergence");
}

double cap_weight(Angle x) {
    if (!(x > 0.0 && x < kPi)) throw domain_error("cap_weight: argument outside (0, pi)");
    const double s = std::sin(x);
    return s * s * s * std::cos(x) / sin_minus_tcos(x);
}

double perimeter_defect(Angle x, double y) {
    if (!(x > 0.0 && x < kPi)) throw domain_error("perimeter_defect: x outside (0, pi)");
    const double target = seg_area_ratio(x) + y;
    const double t = seg_angle(target);
    return std::sin(x) * t_over_sin(t) - x;
}

double oval_limit_value(Angle eta1, Angle eta2) {
    auto term = [](double e) {
        if (!(e > 0.0 && e <= kPi / 2))
            throw domain_error("oval_limit_value: argument outside (0, pi/2]");
        return std::cos(e) / (8.0 * sin_minus_tcos(e));
    };
    return kPi / 8.0 * (term(eta1) + term(eta2));
}

std::pair<std::pair<Angle, Angle>, double> minimize_oval_limit(double lo) {
    // Each term is decreasing in its angle, so the minimum over the
    // feasible triangle {eta_i >= lo, eta1 + eta2 <= pi/2} lies on the
    // line eta1 + eta2 = pi/2; golden-section there.
    const double hi = kPi / 2 - lo;
    auto f = [](double e1) { return oval_limit_value(e1, kPi / 2 - e1); };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    const double e1 = 0.5 * (a + b);
    return {{e1, kPi / 2 - e1}, f(e1)};
}

}  // namespace qiso
