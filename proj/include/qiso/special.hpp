#pragma once

#include <utility>

namespace qiso {

// Angles are plain doubles in radians throughout.
using Angle = double;

// Area of the circular segment of the unit disk cut by a chord at
// half-angle t, i.e. t - sin(t)cos(t). Odd and strictly increasing.
double seg_area(Angle t);

// Segment area divided by the squared half-chord: seg_area(t)/sin^2(t),
// extended by continuity with value 0 at t = 0. Odd, strictly increasing
// on (-pi, pi). Throws domain_error for |t| >= pi.
double seg_area_ratio(Angle t);

// Inverse of seg_area_ratio on (-pi, pi). Bracketed Newton with a
// bisection safeguard; converges for any finite y.
Angle seg_angle(double y);

// sin^3(x) cos(x) / (sin(x) - x cos(x)) on (0, pi), the weight appearing
// in the second-order optimality quantity Q. Evaluated in a tan-free form
// so x = pi/2 is regular; sign follows cos(x).
double cap_weight(Angle x);

// Half-perimeter excess of the circular cap that encloses normalized area
// y over the chord at half-angle x:
//   sin(x) * T/sin(T) - x  with  T = seg_angle(seg_area_ratio(x) + y).
// Vanishes identically at y = 0.
double perimeter_defect(Angle x, double y);

// Limit of deficit/asymmetry^2 along a shrinking two-cap family with cap
// half-angles (eta1, eta2):
//   (pi/8) * [ cos(e)/(8(sin(e) - e cos(e))) summed over e = eta1, eta2 ].
// Arguments must lie in (0, pi/2].
double oval_limit_value(Angle eta1, Angle eta2);

// Minimize oval_limit_value over eta1, eta2 >= lo with eta1 + eta2 <= pi/2
// (the feasibility constraint of the cap family). Returns ((eta1, eta2),
// value); the minimum sits at (pi/4, pi/4).
std::pair<std::pair<Angle, Angle>, double> minimize_oval_limit(double lo = 0.01);

// t/sin(t) with the removable singularity at 0 filled in by series.
double t_over_sin(double t);

}  // namespace qiso
