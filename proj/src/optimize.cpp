#include "qiso/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "qiso/errors.hpp"

namespace qiso {

std::pair<double, double> golden_section(const std::function<double(double)>& f,
                                         double a, double b, double xtol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double xtol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw numeric_error("bisect_root: no sign change in bracket");
    while (b - a > xtol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m; fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

NelderMead2Result nelder_mead_2d(const std::function<double(const std::array<double, 2>&)>& f,
                                 std::array<double, 2> x0, double step,
                                 double xtol, double ftol, int max_evals) {
    using P = std::array<double, 2>;
    struct V { P x; double fx; };
    int evals = 0;
    auto eval = [&](const P& p) { ++evals; return f(p); };

    std::array<V, 3> s = {V{x0, eval(x0)},
                          V{{x0[0] + step, x0[1]}, 0.0},
                          V{{x0[0], x0[1] + step}, 0.0}};
    s[1].fx = eval(s[1].x);
    s[2].fx = eval(s[2].x);

    auto order = [&] { std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.fx < b.fx; }); };
    order();

    while (evals < max_evals) {
        const double diam = std::max(
            std::max(std::abs(s[0].x[0] - s[1].x[0]) + std::abs(s[0].x[1] - s[1].x[1]),
                     std::abs(s[0].x[0] - s[2].x[0]) + std::abs(s[0].x[1] - s[2].x[1])),
            std::abs(s[1].x[0] - s[2].x[0]) + std::abs(s[1].x[1] - s[2].x[1]));
        if (diam < xtol) break;
        if (std::isfinite(s[2].fx) && s[2].fx - s[0].fx < ftol) break;

        const P c{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        auto along = [&](double t) { return P{c[0] + t * (c[0] - s[2].x[0]), c[1] + t * (c[1] - s[2].x[1])}; };

        const P xr = along(1.0);
        const double fr = eval(xr);
        if (fr < s[0].fx) {
            const P xe = along(2.0);
            const double fe = eval(xe);
            s[2] = fe < fr ? V{xe, fe} : V{xr, fr};
        } else if (fr < s[1].fx) {
            s[2] = {xr, fr};
        } else {
            const P xc = along(fr < s[2].fx ? 0.5 : -0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, s[2].fx)) {
                s[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = {0.5 * (s[i].x[0] + s[0].x[0]), 0.5 * (s[i].x[1] + s[0].x[1])};
                    s[i].fx = eval(s[i].x);
                }
            }
        }
        order();
    }
    return {s[0].x, s[0].fx, evals};
}

}  // namespace qiso
