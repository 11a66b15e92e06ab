#include "qiso/symmetrize.hpp"

#include <cmath>
#include <numbers>

#include "qiso/errors.hpp"

namespace qiso {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Decomposition decompose(const ArcRegion& region, const Ball& ball) {
    Decomposition out;
    out.ball = ball;
    const double a = area(region);
    const auto clip = clip_with_ball(region, ball);
    out.area_out = std::max(0.0, a - clip.inter_area);
    out.area_in = std::max(0.0, ball.area() - clip.inter_area);
    const double r = ball.radius;
    double inside = 0.0, shared = 0.0;
    for (const auto& [a0, a1] : clip.inside_arcs) inside += r * (a1 - a0);
    for (const auto& [a0, a1] : clip.on_arcs) shared += r * (a1 - a0);
    inside = std::min(inside, kTwoPi * r);
    shared = std::min(shared, kTwoPi * r - inside);
    out.gamma_in = std::max(0.0, kTwoPi * r - inside - shared);
    out.gamma_out = kTwoPi * r - out.gamma_in;  // strictly-inside plus shared
    out.gamma_shared = shared;
    return out;
}

Angle solve_cap(Angle eta, double target_area, CapSide side) {
    if (!(eta > 0.0 && eta < kPi / 2))
        throw domain_error("solve_cap: chord half-angle outside (0, pi/2)");
    if (!(target_area >= 0.0) || !std::isfinite(target_area))
        throw domain_error("solve_cap: target area must be finite and non-negative");
    const double s = std::sin(eta);
    const double shift = target_area / (s * s);
    const double y = seg_area_ratio(eta) + (side == CapSide::outer ? shift : -shift);
    return seg_angle(y);
}

void append_cap(Loop& loop, Angle eta, Angle theta, Angle axis, int side) {
    const double flat_tol = 1e-12;
    const Vec2 u(std::cos(axis), std::sin(axis));
    const Vec2 v(-u.y(), u.x());
    const Vec2 p0 = std::cos(eta) * u - std::sin(eta) * v;  // start (CCW order)
    const Vec2 p1 = std::cos(eta) * u + std::sin(eta) * v;

    if (std::abs(theta) <= flat_tol) {
        loop.push_back(Edge::segment(p0, p1));
        return;
    }
    if (side > 0 || theta > 0.0) {
        // center on the axis at distance cos(eta) - R cos(theta) from origin
        const double th = std::abs(theta);
        const double radius = std::sin(eta) / std::sin(th);
        const double d = std::cos(eta) - radius * std::cos(th);
        const Vec2 c = d * u;
        loop.push_back(Edge::arc(c, radius, axis - th, 2.0 * th));
    } else {
        // curvature-reversed inner cap: center beyond the chord, the arc
        // dips into the ball and is traversed clockwise
        const double th = -theta;
        const double radius = std::sin(eta) / std::sin(th);
        const double d = std::cos(eta) + radius * std::cos(th);
        const Vec2 c = d * u;
        loop.push_back(Edge::arc(c, radius, axis - kPi + th, -2.0 * th));
    }
}

ArcRegion build_cap_set(Angle eta_out, Angle theta_out, Angle eta_in, Angle theta_in) {
    if (eta_out < 0.0 || eta_in < 0.0) throw domain_error("build_cap_set: negative chord half-angle");
    if (eta_out + eta_in > kPi / 2 + 1e-7)
        throw domain_error("build_cap_set: caps overlap (eta_out + eta_in > pi/2)");
    const double tiny = 1e-12;
    if (eta_out <= tiny && eta_in <= tiny) return make_disk(Vec2(0, 0), 1.0);

    // rounded inputs may overshoot the closed constraint; snap the gap shut
    if (eta_out + eta_in > kPi / 2) eta_in = kPi / 2 - eta_out;
    const double gap = kPi / 2 - eta_out - eta_in;
    Loop loop;
    auto ball_arc = [&](double from) {
        if (gap > tiny) loop.push_back(Edge::arc(Vec2(0, 0), 1.0, from, gap));
    };

    // CCW from the +x outer cap: cap, gap arc, +y inner cap, gap arc, ...
    const double axes[4] = {0.0, kPi / 2, kPi, 1.5 * kPi};
    for (int k = 0; k < 4; ++k) {
        const bool outer = (k % 2) == 0;
        const double eta = outer ? eta_out : eta_in;
        const double theta = outer ? theta_out : theta_in;
        if (eta > tiny) append_cap(loop, eta, theta, axes[k], outer ? +1 : -1);
        ball_arc(axes[k] + eta);
    }
    ArcRegion out;
    out.loops.push_back(std::move(loop));
    return out;
}

SymmetrizedSet symmetrize(const ArcRegion& region, const SearchConfig& config) {
    const double a = area(region);
    if (!(a > 0.0)) throw domain_error("symmetrize: region area must be positive");

    const auto asym = optimal_balls(region, config);
    const double r = std::sqrt(a / kPi);

    SymmetrizedSet out;
    out.ball = Ball{asym.optimal_centers.front(), r};
    if (asym.lambda <= config.lambda_floor) {
        // the ball symmetrizes to itself
        out.region = make_disk(out.ball.center, r);
        return out;
    }

    const auto dec = decompose(region, out.ball);
    const double honest_out = dec.gamma_out - dec.gamma_shared;
    out.eta_out = honest_out / (4.0 * r);
    out.eta_in = dec.gamma_in / (4.0 * r);
    if (out.eta_out >= kPi / 2 - 1e-12 || out.eta_in >= kPi / 2 - 1e-12)
        throw domain_error("symmetrize: a cap would span a half circle (construction undefined)");

    const double a_out = 0.5 * dec.area_out / (r * r);  // per cap, unit-ball frame
    const double a_in = 0.5 * dec.area_in / (r * r);
    const double tiny = 1e-12;
    if ((a_out > 1e-9 && out.eta_out <= tiny) || (a_in > 1e-9 && out.eta_in <= tiny))
        throw domain_error("symmetrize: positive cap area over a vanishing chord");

    out.theta_out = (a_out <= tiny || out.eta_out <= tiny) ? out.eta_out
                                                           : solve_cap(out.eta_out, a_out, CapSide::outer);
    out.theta_in = (a_in <= tiny || out.eta_in <= tiny) ? out.eta_in
                                                        : solve_cap(out.eta_in, a_in, CapSide::inner);

    ArcRegion unit = build_cap_set(out.eta_out, out.theta_out, out.eta_in, out.theta_in);
    out.region = rigid_transform(scale_region(unit, r), 0.0, out.ball.center);
    return out;
}

}  // namespace qiso
