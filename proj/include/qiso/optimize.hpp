#pragma once

#include <array>
#include <functional>
#include <utility>

namespace qiso {

// Golden-section minimization of a unimodal function on [a, b].
std::pair<double, double> golden_section(const std::function<double(double)>& f,
                                         double a, double b, double xtol = 1e-10);

// Bisection root of a continuous function with f(a) and f(b) of opposite
// sign; returns the midpoint of the final bracket.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double xtol = 1e-12);

// Deterministic Nelder-Mead in two variables. Infeasible points may return
// +inf. Stops when the simplex collapses below xtol or f-spread below ftol.
struct NelderMead2Result {
    std::array<double, 2> x;
    double value;
    int evals;
};
NelderMead2Result nelder_mead_2d(const std::function<double(const std::array<double, 2>&)>& f,
                                 std::array<double, 2> x0, double step,
                                 double xtol = 1e-9, double ftol = 1e-14,
                                 int max_evals = 2000);

}  // namespace qiso
