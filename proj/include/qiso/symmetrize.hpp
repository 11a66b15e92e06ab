#pragma once

#include "qiso/fraenkel.hpp"
#include "qiso/geometry.hpp"
#include "qiso/special.hpp"

namespace qiso {

// Split of the ball circle and the symmetric difference relative to a ball.
// gamma_out / gamma_in are the lengths of the circle strictly interior /
// strictly exterior to the region; gamma_shared lies on the region boundary
// itself, so gamma_in + gamma_out + gamma_shared = 2 pi r.
struct Decomposition {
    double gamma_in = 0.0;
    double gamma_out = 0.0;     // complement convention: includes shared arcs
    double gamma_shared = 0.0;  // portion of gamma_out lying on the region boundary
    double area_out = 0.0;      // |region \ ball|
    double area_in = 0.0;       // |ball \ region|
    Ball ball;
};

Decomposition decompose(const ArcRegion& region, const Ball& ball);

enum class CapSide { outer, inner };

// Cap half-angle theta for a cap over the unit-ball chord at half-angle eta
// enclosing the given area: outer caps solve
//   sin^2(eta) (h(theta) - h(eta)) = area,
// inner caps the mirrored equation; a negative result means the inner cap
// reverses curvature (bulges away from the ball center).
Angle solve_cap(Angle eta, double target_area, CapSide side);

// Doubly symmetric set around the unit ball at the origin: two outer caps
// centered on the x axis (chord half-angle eta_out, cap angle theta_out),
// two inner caps on the y axis, and four ball arcs filling the gaps.
ArcRegion build_cap_set(Angle eta_out, Angle theta_out, Angle eta_in, Angle theta_in);

// Appends the unit-ball cap arc over the chord at half-angle eta, centered
// at polar angle axis, in CCW boundary order; side +1 bulges outward,
// -1 carves inward (theta < 0 reverses the inner curvature).
void append_cap(Loop& loop, Angle eta, Angle theta, Angle axis, int side);

struct SymmetrizedSet {
    ArcRegion region;
    Ball ball;  // the optimal ball the construction is anchored to
    Angle eta_out = 0.0, eta_in = 0.0;
    Angle theta_out = 0.0, theta_in = 0.0;
};

// The rearrangement: find an optimal ball, conserve |region \ B|, |B \ region|
// and the circle-arc lengths gamma_out, gamma_in, and rebuild as a doubly
// symmetric four-cap set (plus ball arcs when the contact is not full).
SymmetrizedSet symmetrize(const ArcRegion& region, const SearchConfig& config = {});

}  // namespace qiso
