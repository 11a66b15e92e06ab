#include "qiso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qiso/errors.hpp"

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double a) {  // into [0, 2pi)
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

// Angle membership in an arc span, with an angular slack at both ends.
bool angle_in_span(double phi, double start, double sweep, double slack) {
    if (std::abs(sweep) >= kTwoPi - 1e-15) return true;
    const double d = sweep > 0.0 ? wrap_positive(phi - start) : wrap_positive(start - phi);
    return d <= std::abs(sweep) + slack || d >= kTwoPi - slack;
}

}  // namespace

// ---------------------------------------------------------------- edges

Edge Edge::segment(const Vec2& from, const Vec2& to) {
    Edge e;
    e.kind = Kind::segment;
    e.a = from;
    e.b = to;
    return e;
}

Edge Edge::arc(const Vec2& center, double radius, double start, double sweep) {
    Edge e;
    e.kind = Kind::arc;
    e.center = center;
    e.radius = radius;
    e.start = start;
    e.sweep = sweep;
    return e;
}

Vec2 Edge::point_at(double t) const {
    if (kind == Kind::segment) return a + t * (b - a);
    const double th = start + t * sweep;
    return center + radius * Vec2(std::cos(th), std::sin(th));
}

Vec2 Edge::tangent_at(double t) const {
    if (kind == Kind::segment) return (b - a).normalized();
    const double th = start + t * sweep;
    const double s = sweep >= 0.0 ? 1.0 : -1.0;
    return s * Vec2(-std::sin(th), std::cos(th));
}

double Edge::length() const {
    if (kind == Kind::segment) return (b - a).norm();
    return radius * std::abs(sweep);
}

double Edge::green(double t0, double t1) const {
    if (kind == Kind::segment) {
        const Vec2 p = point_at(t0), q = point_at(t1);
        return 0.5 * cross2(p, q);
    }
    const double th0 = start + t0 * sweep, th1 = start + t1 * sweep;
    return 0.5 * (radius * radius * (th1 - th0) +
                  radius * (center.x() * (std::sin(th1) - std::sin(th0)) +
                            center.y() * (std::cos(th0) - std::cos(th1))));
}

double Ball::area() const { return kPi * radius * radius; }

ArcRegion make_disk(const Vec2& center, double radius) {
    ArcRegion r;
    r.loops.push_back({Edge::arc(center, radius, 0.0, kPi), Edge::arc(center, radius, kPi, kPi)});
    return r;
}

// ---------------------------------------------------------------- measures

namespace {

double region_scale(const ArcRegion& region) {
    double m = 1.0;
    for (const auto& loop : region.loops)
        for (const auto& e : loop) {
            m = std::max(m, e.first().cwiseAbs().maxCoeff());
            if (e.kind == Edge::Kind::arc) m = std::max(m, e.center.cwiseAbs().maxCoeff() + e.radius);
        }
    return m;
}

void check_closed(const ArcRegion& region) {
    const double tol = kClosureTol * region_scale(region);
    for (const auto& loop : region.loops) {
        if (loop.empty()) throw domain_error("region: empty loop");
        for (size_t i = 0; i < loop.size(); ++i) {
            const Vec2 gap = loop[i].last() - loop[(i + 1) % loop.size()].first();
            if (gap.norm() > tol) throw domain_error("region: open loop (gap " + std::to_string(gap.norm()) + ")");
        }
    }
}

}  // namespace

double area(const ArcRegion& region) {
    check_closed(region);
    double a = 0.0;
    for (const auto& loop : region.loops)
        for (const auto& e : loop) a += e.green(0.0, 1.0);
    return a;
}

double perimeter(const ArcRegion& region) {
    check_closed(region);
    double p = 0.0;
    for (const auto& loop : region.loops)
        for (const auto& e : loop) p += e.length();
    return p;
}

namespace {

// Accumulates A, integral of x dA and integral of y dA over a loop via
//   int x dA = oint x^2/2 dy,   int y dA = -oint y^2/2 dx.
void loop_moments(const Loop& loop, double& a, double& mx, double& my) {
    for (const auto& e : loop) {
        a += e.green(0.0, 1.0);
        if (e.kind == Edge::Kind::segment) {
            const double x0 = e.a.x(), y0 = e.a.y(), x1 = e.b.x(), y1 = e.b.y();
            mx += (y1 - y0) * (x0 * x0 + x0 * x1 + x1 * x1) / 6.0;
            my += -(x1 - x0) * (y0 * y0 + y0 * y1 + y1 * y1) / 6.0;
        } else {
            const double r = e.radius, cx = e.center.x(), cy = e.center.y();
            const double t0 = e.start, t1 = e.start + e.sweep;
            const double s0 = std::sin(t0), s1 = std::sin(t1), c0 = std::cos(t0), c1 = std::cos(t1);
            const double i_c = s1 - s0;
            const double i_c2 = 0.5 * (t1 - t0) + 0.25 * (std::sin(2 * t1) - std::sin(2 * t0));
            const double i_c3 = (s1 - s1 * s1 * s1 / 3.0) - (s0 - s0 * s0 * s0 / 3.0);
            const double i_s = c0 - c1;
            const double i_s2 = 0.5 * (t1 - t0) - 0.25 * (std::sin(2 * t1) - std::sin(2 * t0));
            const double i_s3 = (-c1 + c1 * c1 * c1 / 3.0) - (-c0 + c0 * c0 * c0 / 3.0);
            mx += 0.5 * (cx * cx * r * i_c + 2.0 * cx * r * r * i_c2 + r * r * r * i_c3);
            my += 0.5 * (cy * cy * r * i_s + 2.0 * cy * r * r * i_s2 + r * r * r * i_s3);
        }
    }
}

}  // namespace

Vec2 loop_centroid(const Loop& loop) {
    double a = 0.0, mx = 0.0, my = 0.0;
    loop_moments(loop, a, mx, my);
    if (std::abs(a) < 1e-300) throw domain_error("loop_centroid: vanishing area");
    return Vec2(mx / a, my / a);
}

Vec2 centroid(const ArcRegion& region) {
    check_closed(region);
    double a = 0.0, mx = 0.0, my = 0.0;
    for (const auto& loop : region.loops) loop_moments(loop, a, mx, my);
    if (std::abs(a) < 1e-300) throw domain_error("centroid: vanishing area");
    return Vec2(mx / a, my / a);
}

std::pair<Vec2, Vec2> bounding_box(const ArcRegion& region) {
    Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
    auto take = [&](const Vec2& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& loop : region.loops)
        for (const auto& e : loop) {
            take(e.first());
            take(e.last());
            if (e.kind == Edge::Kind::arc) {
                const double dirs[4] = {0.0, kPi / 2, kPi, 1.5 * kPi};
                for (double d : dirs)
                    if (angle_in_span(d, e.start, e.sweep, 0.0))
                        take(e.center + e.radius * Vec2(std::cos(d), std::sin(d)));
            }
        }
    return {lo, hi};
}

// ---------------------------------------------------------------- point queries

double boundary_distance(const ArcRegion& region, const Vec2& p) {
    double best = 1e300;
    for (const auto& loop : region.loops)
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment) {
                const Vec2 d = e.b - e.a;
                const double len2 = d.squaredNorm();
                const double t = len2 > 0.0 ? std::clamp((p - e.a).dot(d) / len2, 0.0, 1.0) : 0.0;
                best = std::min(best, (p - (e.a + t * d)).norm());
            } else {
                const Vec2 u = p - e.center;
                const double phi = std::atan2(u.y(), u.x());
                if (angle_in_span(phi, e.start, e.sweep, 0.0))
                    best = std::min(best, std::abs(u.norm() - e.radius));
                else
                    best = std::min(best, std::min((p - e.first()).norm(), (p - e.last()).norm()));
            }
        }
    return best;
}

namespace {

// Parity of ray crossings in direction dir; nullopt when the ray passes
// too close to a vertex, a tangency or the query point itself.
// The degeneracy window is far below the geometric tolerance: callers only
// query points that are meaningfully off the boundary, and a tiny window
// keeps near-boundary queries resolvable.
std::optional<bool> ray_parity(const ArcRegion& region, const Vec2& q, const Vec2& dir, double pos_tol) {
    int count = 0;
    for (const auto& loop : region.loops)
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment) {
                const Vec2 d = e.b - e.a;
                const double den = cross2(dir, d);
                const double elen = d.norm();
                if (std::abs(den) <= 1e-14 * elen) {
                    // parallel; degenerate only if the ray lies on the edge line
                    if (std::abs(cross2(e.a - q, dir)) <= pos_tol) return std::nullopt;
                    continue;
                }
                const double s = cross2(e.a - q, d) / den;
                const double t = cross2(e.a - q, dir) / den;
                if (s <= pos_tol) {
                    if (s >= -pos_tol && t >= -pos_tol / elen && t <= 1.0 + pos_tol / elen)
                        return std::nullopt;  // query point on the edge
                    continue;
                }
                const double t_tol = pos_tol / elen;
                if (t < -t_tol || t > 1.0 + t_tol) continue;
                if (t < t_tol || t > 1.0 - t_tol) return std::nullopt;  // vertex hit
                ++count;
            } else {
                const Vec2 u = q - e.center;
                const double r = e.radius;
                const double b = u.dot(dir);
                const double l2 = u.squaredNorm() - b * b;  // squared line-center distance
                const double line_dist = std::sqrt(std::max(0.0, l2));
                if (line_dist > r + pos_tol) continue;
                if (std::abs(line_dist - r) <= pos_tol) {
                    // grazing: degenerate only if the touch point concerns the arc
                    const double s_mid = -b;
                    if (s_mid > -pos_tol) {
                        const Vec2 touch = q + s_mid * dir;
                        const double phi = std::atan2(touch.y() - e.center.y(), touch.x() - e.center.x());
                        if (angle_in_span(phi, e.start, e.sweep, 2.0 * pos_tol / r)) return std::nullopt;
                    }
                    continue;
                }
                const double half = std::sqrt(std::max(0.0, r * r - l2));
                const double ang_tol = pos_tol / r;
                for (double s : {-b - half, -b + half}) {
                    if (s <= pos_tol) {
                        if (s >= -pos_tol) {
                            const Vec2 hit = q + s * dir;
                            const double phi = std::atan2(hit.y() - e.center.y(), hit.x() - e.center.x());
                            if (angle_in_span(phi, e.start, e.sweep, ang_tol)) return std::nullopt;
                        }
                        continue;
                    }
                    const Vec2 hit = q + s * dir;
                    const double phi = std::atan2(hit.y() - e.center.y(), hit.x() - e.center.x());
                    if (!angle_in_span(phi, e.start, e.sweep, -ang_tol)) {
                        if (angle_in_span(phi, e.start, e.sweep, ang_tol)) return std::nullopt;  // endpoint hit
                        continue;
                    }
                    ++count;
                }
            }
        }
    return (count % 2) == 1;
}

}  // namespace

bool contains(const ArcRegion& region, const Vec2& p) {
    const double pos_tol = 2e-12 * region_scale(region);
    // golden-angle direction sequence; deterministic retries on degeneracy
    for (int k = 0; k < 64; ++k) {
        const double a = 0.57721566 + k * 2.39996322972865332;
        const auto r = ray_parity(region, p, Vec2(std::cos(a), std::sin(a)), pos_tol);
        if (r) return *r;
    }
    throw numeric_error("contains: ray casting failed to find a clean direction");
}

// ---------------------------------------------------------------- circle interactions

namespace {

struct RawHit {
    size_t loop = 0, edge = 0;
    double t = 0.0;      // param on the edge
    double angle = 0.0;  // on the ball circle
    Vec2 p{0, 0};
    int sign = 0;        // +1 entering the ball, -1 exiting
    bool tangential = false;
};

struct HitScan {
    std::vector<RawHit> hits;
    bool tangential = false;  // grazing or shared-circle contact anywhere
    // edges whose circle nearly coincides with the ball circle, and the
    // angular spans they cover on it (CCW, hi > lo)
    std::vector<std::vector<char>> coincident;
    std::vector<std::pair<double, double>> spans;
};

// maximal separation between an edge circle and the ball circle below which
// the two are treated as one shared curve
double coincidence_tol(double ball_radius) { return 32.0 * kTangencyTol * std::max(1.0, ball_radius); }

int crossing_sign(const Edge& e, double t, const Vec2& p, const Ball& ball, bool& tangential) {
    const double dotv = e.tangent_at(t).dot(p - ball.center);
    if (std::abs(dotv) <= kTangencyTol * ball.radius) {
        tangential = true;
        return 0;
    }
    return dotv < 0.0 ? +1 : -1;
}

HitScan collect_hits(const ArcRegion& region, const Ball& ball) {
    HitScan out;
    const Vec2 c = ball.center;
    const double r = ball.radius;
    const double tol = kTangencyTol * std::max(1.0, r);
    const double co_tol = coincidence_tol(r);

    out.coincident.resize(region.loops.size());
    for (size_t li = 0; li < region.loops.size(); ++li)
        out.coincident[li].assign(region.loops[li].size(), 0);

    for (size_t li = 0; li < region.loops.size(); ++li) {
        const Loop& loop = region.loops[li];
        for (size_t ei = 0; ei < loop.size(); ++ei) {
            const Edge& e = loop[ei];
            if (e.kind == Edge::Kind::arc &&
                (e.center - c).norm() + std::abs(e.radius - r) <= co_tol) {
                // shared curve: no discrete crossings, remember the span
                out.coincident[li][ei] = 1;
                out.tangential = true;
                double lo = e.sweep > 0.0 ? e.start : e.start + e.sweep;
                out.spans.push_back({lo, lo + std::abs(e.sweep)});
                continue;
            }
            if (e.kind == Edge::Kind::segment) {
                const Vec2 d = e.b - e.a;
                const double len = d.norm();
                if (len < 1e-300) continue;
                const double b_half = (e.a - c).dot(d) / (len * len);
                const double t_near = -b_half;
                const double near_dist = (e.a + t_near * d - c).norm();
                // line-circle closest approach; grazing contact inside the
                // segment window is tangential, not a crossing, but still
                // marks an interval boundary on the circle
                if (near_dist > r - tol && near_dist < r + tol && t_near > -tol / len &&
                    t_near < 1.0 + tol / len) {
                    out.tangential = true;
                    RawHit h;
                    h.loop = li;
                    h.edge = ei;
                    h.t = std::clamp(t_near, 0.0, 1.0);
                    h.p = e.point_at(h.t);
                    h.angle = std::atan2(h.p.y() - c.y(), h.p.x() - c.x());
                    h.sign = 0;
                    h.tangential = true;
                    out.hits.push_back(h);
                    continue;
                }
                if (near_dist >= r) continue;
                const double half = std::sqrt(std::max(0.0, r * r - near_dist * near_dist)) / len;
                const double t_tol = tol / len;
                for (double t : {t_near - half, t_near + half}) {
                    if (t < -t_tol || t > 1.0 + t_tol) continue;
                    const double tc = std::clamp(t, 0.0, 1.0);
                    RawHit h;
                    h.loop = li;
                    h.edge = ei;
                    h.t = tc;
                    h.p = e.point_at(tc);
                    h.angle = std::atan2(h.p.y() - c.y(), h.p.x() - c.x());
                    h.sign = crossing_sign(e, tc, h.p, ball, h.tangential);
                    if (h.tangential) out.tangential = true;
                    out.hits.push_back(h);
                }
            } else {
                const Vec2 cc = ball.center - e.center;
                const double d = cc.norm();
                const double r0 = e.radius;
                if (d < 1e-14 * std::max(1.0, r0)) continue;  // concentric, different radii
                if (d > r0 + r + tol || d < std::abs(r0 - r) - tol) continue;
                if (std::abs(d - (r0 + r)) <= tol || std::abs(d - std::abs(r0 - r)) <= tol) {
                    // external or internal tangency; record only if the touch
                    // point belongs to this arc's span
                    const bool external = std::abs(d - (r0 + r)) <= tol;
                    const double dir_sign = (external || r0 > r) ? 1.0 : -1.0;
                    const Vec2 touch = e.center + dir_sign * (r0 / d) * cc;
                    const double phi = std::atan2(touch.y() - e.center.y(), touch.x() - e.center.x());
                    if (angle_in_span(phi, e.start, e.sweep, 2.0 * tol / r0)) {
                        out.tangential = true;
                        double dd = e.sweep > 0.0 ? wrap_positive(phi - e.start) : wrap_positive(e.start - phi);
                        if (dd > std::abs(e.sweep)) dd = dd >= kTwoPi - 4.0 * tol / r0 ? 0.0 : std::abs(e.sweep);
                        RawHit h;
                        h.loop = li;
                        h.edge = ei;
                        h.t = std::clamp(dd / std::abs(e.sweep), 0.0, 1.0);
                        h.p = touch;
                        h.angle = std::atan2(touch.y() - c.y(), touch.x() - c.x());
                        h.sign = 0;
                        h.tangential = true;
                        out.hits.push_back(h);
                    }
                    continue;
                }
                const double aa = (r0 * r0 - r * r + d * d) / (2.0 * d);
                const double h2 = r0 * r0 - aa * aa;
                const double hh = std::sqrt(std::max(0.0, h2));
                const Vec2 u = cc / d;
                const Vec2 v(-u.y(), u.x());
                const double ang_tol = tol / r0;
                for (double s : {-1.0, 1.0}) {
                    const Vec2 p = e.center + aa * u + s * hh * v;
                    const double phi = std::atan2(p.y() - e.center.y(), p.x() - e.center.x());
                    if (!angle_in_span(phi, e.start, e.sweep, ang_tol)) continue;
                    double dd = e.sweep > 0.0 ? wrap_positive(phi - e.start) : wrap_positive(e.start - phi);
                    if (dd >= kTwoPi - 2.0 * ang_tol) dd = 0.0;  // hit at the span start
                    double t = std::min(dd, std::abs(e.sweep)) / std::abs(e.sweep);
                    t = std::clamp(t, 0.0, 1.0);
                    RawHit h;
                    h.loop = li;
                    h.edge = ei;
                    h.t = t;
                    h.p = p;
                    h.angle = std::atan2(p.y() - c.y(), p.x() - c.x());
                    h.sign = crossing_sign(e, t, p, ball, h.tangential);
                    if (h.tangential) out.tangential = true;
                    out.hits.push_back(h);
                }
            }
        }
    }
    return out;
}

// Merge hits that coincide on the ball circle (vertex hits appear once per
// adjacent edge). A merged cluster with consistent sign is one crossing;
// mixed signs mean the boundary touches without crossing.
struct MergedHits {
    std::vector<Crossing> crossings;
    std::vector<double> boundary_angles;  // all contact angles incl. touches
    bool tangential = false;
};

MergedHits merge_hits(std::vector<RawHit> hits, const Ball& ball) {
    MergedHits out;
    if (hits.empty()) return out;
    const double ang_tol = 4.0 * kTangencyTol / ball.radius;
    std::sort(hits.begin(), hits.end(), [](const RawHit& x, const RawHit& y) { return x.angle < y.angle; });

    std::vector<std::vector<RawHit>> clusters;
    for (const auto& h : hits) {
        if (!clusters.empty() && std::abs(h.angle - clusters.back().back().angle) <= ang_tol)
            clusters.back().push_back(h);
        else
            clusters.push_back({h});
    }
    // wrap-around: merge last into first if they touch across +-pi
    if (clusters.size() > 1) {
        const double wrap_gap = (clusters.front().front().angle + kTwoPi) - clusters.back().back().angle;
        if (wrap_gap <= ang_tol) {
            for (auto& h : clusters.back()) clusters.front().push_back(h);
            clusters.pop_back();
        }
    }

    for (const auto& cl : clusters) {
        bool any_tang = false;
        int pos = 0, neg = 0;
        for (const auto& h : cl) {
            if (h.tangential) any_tang = true;
            if (h.sign > 0) ++pos;
            if (h.sign < 0) ++neg;
        }
        out.boundary_angles.push_back(cl.front().angle);
        if (any_tang || (pos > 0 && neg > 0) || (pos == 0 && neg == 0)) {
            out.tangential = true;  // touch or graze: not a crossing
            continue;
        }
        Crossing cr;
        cr.p = cl.front().p;
        cr.angle = cl.front().angle;
        cr.sign = pos > 0 ? +1 : -1;
        out.crossings.push_back(cr);
    }
    std::sort(out.boundary_angles.begin(), out.boundary_angles.end());
    return out;
}

bool alternating(const std::vector<Crossing>& cs) {
    if (cs.size() % 2 != 0) return false;
    for (size_t i = 0; i + 1 < cs.size(); ++i)
        if (cs[i].sign == cs[i + 1].sign) return false;
    return true;
}

}  // namespace

std::vector<Crossing> circle_boundary_intersections(const ArcRegion& region, const Ball& ball) {
    check_closed(region);
    auto scan = collect_hits(region, ball);
    auto merged = merge_hits(std::move(scan.hits), ball);
    if (scan.tangential || merged.tangential)
        throw transversality_error("boundary touches the circle tangentially");
    if (!alternating(merged.crossings))
        throw transversality_error("crossing signs do not alternate (degenerate contact)");
    return merged.crossings;
}

// ---------------------------------------------------------------- clipping

namespace {

struct ClipDegenerate {};  // internal signal: retry on the flattened region

double ball_arc_green(const Ball& ball, double a0, double a1) {
    const double r = ball.radius;
    return 0.5 * (r * r * (a1 - a0) +
                  r * (ball.center.x() * (std::sin(a1) - std::sin(a0)) +
                       ball.center.y() * (std::cos(a0) - std::cos(a1))));
}

ArcRegion flatten(const ArcRegion& region, double area_tol) {
    ArcRegion out;
    for (const auto& loop : region.loops) {
        Loop fl;
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment) {
                fl.push_back(e);
                continue;
            }
            const double sw = std::abs(e.sweep);
            double nd = std::sqrt(e.radius * e.radius * sw * sw * sw / (12.0 * area_tol));
            const int n = static_cast<int>(std::clamp(std::ceil(nd), 8.0, 2.0e6));
            Vec2 prev = e.point_at(0.0);
            for (int i = 1; i <= n; ++i) {
                const Vec2 next = e.point_at(static_cast<double>(i) / n);
                fl.push_back(Edge::segment(prev, next));
                prev = next;
            }
        }
        out.loops.push_back(std::move(fl));
    }
    return out;
}

CircleClip clip_impl(const ArcRegion& region, const Ball& ball, double region_area, bool allow_fallback);

CircleClip clip_exact(const ArcRegion& region, const Ball& ball, double region_area) {
    CircleClip out;
    const double r = ball.radius;
    const double band = 2.0 * kTangencyTol * std::max(1.0, r);

    auto scan = collect_hits(region, ball);
    out.tangential = scan.tangential;

    // per-edge split parameters
    std::vector<std::vector<std::vector<double>>> splits(region.loops.size());
    for (size_t li = 0; li < region.loops.size(); ++li) splits[li].resize(region.loops[li].size());
    for (const auto& h : scan.hits)
        if (h.t > 1e-12 && h.t < 1.0 - 1e-12) splits[h.loop][h.edge].push_back(h.t);

    auto merged = merge_hits(std::move(scan.hits), ball);
    out.tangential = out.tangential || merged.tangential;
    out.crossings = merged.crossings;

    double inter = 0.0;
    std::vector<std::pair<double, double>> hug_spans = scan.spans;
    auto record_span = [&](const Vec2& p0, const Vec2& p1, bool same_dir) {
        const double a0 = std::atan2(p0.y() - ball.center.y(), p0.x() - ball.center.x());
        const double a1 = std::atan2(p1.y() - ball.center.y(), p1.x() - ball.center.x());
        const double lo = same_dir ? a0 : a1;
        const double w = same_dir ? wrap_positive(a1 - a0) : wrap_positive(a0 - a1);
        if (w > 1e-12 && w < kTwoPi - 1e-12) hug_spans.push_back({lo, lo + w});
    };

    // Region boundary pieces inside the ball circle. Sign consensus with a
    // noise floor decides; the tolerance band absorbs one-sided tangential
    // dips; pieces hugging the circle within the band count once, from the
    // region side, when both boundaries run the same way, and their spans
    // mask the matching ball arcs below.
    for (size_t li = 0; li < region.loops.size(); ++li) {
        for (size_t ei = 0; ei < region.loops[li].size(); ++ei) {
            const Edge& e = region.loops[li][ei];
            if (scan.coincident[li][ei]) {
                const Vec2 p = e.point_at(0.5);
                const Vec2 rad = p - ball.center;
                const Vec2 ccw(-rad.y(), rad.x());
                if (e.tangent_at(0.5).dot(ccw) > 0.0) inter += e.green(0.0, 1.0);
                continue;
            }
            auto& ts = splits[li][ei];
            ts.push_back(0.0);
            ts.push_back(1.0);
            std::sort(ts.begin(), ts.end());
            const double noise = 1e-13 * std::max(1.0, r);
            for (size_t k = 0; k + 1 < ts.size(); ++k) {
                const double t0 = ts[k], t1 = ts[k + 1];
                if (t1 - t0 < 1e-13) continue;
                double fmin = 1e300, fmax = -1e300;
                for (int j = 0; j < 3; ++j) {
                    const double t = t0 + (0.25 + 0.25 * j) * (t1 - t0);
                    const double f = (e.point_at(t) - ball.center).norm() - r;
                    fmin = std::min(fmin, f);
                    fmax = std::max(fmax, f);
                }
                if (fmax <= noise) {
                    inter += e.green(t0, t1);
                    if (fmin >= -band) {
                        // inside hug: mask the ball arc underneath
                        out.tangential = true;
                        const Vec2 tm = e.point_at(0.5 * (t0 + t1));
                        const Vec2 ccw(-(tm - ball.center).y(), (tm - ball.center).x());
                        record_span(e.point_at(t0), e.point_at(t1),
                                    e.tangent_at(0.5 * (t0 + t1)).dot(ccw) > 0.0);
                    }
                } else if (fmin >= -noise) {
                    // outside; a hugged ball arc underneath classifies itself
                } else if (fmin >= -band && fmax <= band) {
                    // ambiguous hug within the band: orientation attributes it
                    out.tangential = true;
                    const double tmid = 0.5 * (t0 + t1);
                    const Vec2 p = e.point_at(tmid);
                    const Vec2 ccw(-(p - ball.center).y(), (p - ball.center).x());
                    const bool same_dir = e.tangent_at(tmid).dot(ccw) > 0.0;
                    if (same_dir) inter += e.green(t0, t1);
                    record_span(e.point_at(t0), e.point_at(t1), same_dir);
                } else if (fmax <= band) {
                    inter += e.green(t0, t1);
                } else if (fmin >= -band) {
                    // outside up to a tangential dip
                } else {
                    throw ClipDegenerate{};  // straddles the circle without a recorded crossing
                }
            }
        }
    }

    // coalesce the masked spans (the flattened fallback records one per chord)
    if (!hug_spans.empty()) {
        for (auto& s : hug_spans) {
            const double w = std::min(s.second - s.first, kTwoPi);
            s.first = std::remainder(s.first, kTwoPi);
            s.second = s.first + w;
        }
        std::sort(hug_spans.begin(), hug_spans.end());
        std::vector<std::pair<double, double>> merged_spans;
        for (const auto& s : hug_spans) {
            if (!merged_spans.empty() && s.first <= merged_spans.back().second + 1e-9)
                merged_spans.back().second = std::max(merged_spans.back().second, s.second);
            else
                merged_spans.push_back(s);
        }
        // wrap-around: last span may continue into the first
        if (merged_spans.size() > 1 && merged_spans.back().second >= merged_spans.front().first + kTwoPi - 1e-9) {
            merged_spans.front().first = merged_spans.back().first - kTwoPi;
            merged_spans.pop_back();
        }
        hug_spans = std::move(merged_spans);
    }

    // ball arcs interior to the region; arcs masked by a shared or hugged
    // span are already counted from the region side
    auto in_span = [&](double a) {
        for (const auto& [lo, hi] : hug_spans) {
            const double d = wrap_positive(a - lo);
            if (d <= (hi - lo) + 1e-12) return true;
        }
        return false;
    };
    std::vector<double> bounds = merged.boundary_angles;
    for (const auto& [lo, hi] : hug_spans) {
        bounds.push_back(std::remainder(lo, kTwoPi));
        bounds.push_back(std::remainder(hi, kTwoPi));
    }
    std::sort(bounds.begin(), bounds.end());

    if (bounds.empty()) {
        const Vec2 probe = ball.center + r * Vec2(std::cos(0.1234567), std::sin(0.1234567));
        if (contains(region, probe)) {
            inter += kPi * r * r;
            out.inside_arcs.push_back({-kPi, kPi});
        }
    } else {
        for (size_t i = 0; i < bounds.size(); ++i) {
            const double a0 = bounds[i];
            const double a1 = i + 1 < bounds.size() ? bounds[i + 1] : bounds[0] + kTwoPi;
            if (a1 - a0 < 4.0 * kTangencyTol / r) continue;  // below the cluster resolution
            const double am = 0.5 * (a0 + a1);
            if (in_span(am)) {
                out.on_arcs.push_back({a0, a1});
                continue;
            }
            const Vec2 p = ball.center + r * Vec2(std::cos(am), std::sin(am));
            bool inside = false;
            try {
                inside = contains(region, p);
            } catch (const numeric_error&) {
                // midpoint indistinguishable from the boundary: the region
                // side owns the stretch
                out.tangential = true;
                out.on_arcs.push_back({a0, a1});
                continue;
            }
            if (inside) {
                inter += ball_arc_green(ball, a0, a1);
                out.inside_arcs.push_back({a0, a1});
            }
        }
    }

    const double cap = std::min(region_area, ball.area());
    if (inter < -1e-7 || inter > cap + 1e-7) throw ClipDegenerate{};
    out.inter_area = std::clamp(inter, 0.0, cap);
    return out;
}

CircleClip clip_impl(const ArcRegion& region, const Ball& ball, double region_area, bool allow_fallback) {
    try {
        return clip_exact(region, ball, region_area);
    } catch (const ClipDegenerate&) {
        if (!allow_fallback) throw transversality_error("degenerate region/ball configuration");
    } catch (const numeric_error&) {
        if (!allow_fallback) throw transversality_error("degenerate region/ball configuration");
    }
    ArcRegion flat = flatten(region, 1e-10);
    CircleClip out;
    try {
        out = clip_impl(flat, ball, region_area, false);
    } catch (const std::exception&) {
        throw transversality_error("clip failed on both exact and flattened paths");
    }
    out.used_fallback = true;
    return out;
}

}  // namespace

CircleClip clip_with_ball(const ArcRegion& region, const Ball& ball) {
    check_closed(region);
    if (!(ball.radius > 0.0)) throw domain_error("clip_with_ball: ball radius must be positive");
    return clip_impl(region, ball, area(region), true);
}

double symm_diff_area(const ArcRegion& region, const Ball& ball) {
    check_closed(region);
    if (!(ball.radius > 0.0)) throw domain_error("symm_diff_area: ball radius must be positive");
    const double a = area(region);
    const auto clip = clip_impl(region, ball, a, true);
    return a + ball.area() - 2.0 * clip.inter_area;
}

// ---------------------------------------------------------------- motions

ArcRegion rigid_transform(const ArcRegion& region, double rotation, const Vec2& translation) {
    const double co = std::cos(rotation), si = std::sin(rotation);
    auto rot = [&](const Vec2& p) { return Vec2(co * p.x() - si * p.y(), si * p.x() + co * p.y()); };
    ArcRegion out;
    for (const auto& loop : region.loops) {
        Loop l;
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment)
                l.push_back(Edge::segment(rot(e.a) + translation, rot(e.b) + translation));
            else
                l.push_back(Edge::arc(rot(e.center) + translation, e.radius, e.start + rotation, e.sweep));
        }
        out.loops.push_back(std::move(l));
    }
    return out;
}

ArcRegion scale_region(const ArcRegion& region, double factor) {
    if (!(factor > 0.0)) throw domain_error("scale_region: factor must be positive");
    ArcRegion out;
    for (const auto& loop : region.loops) {
        Loop l;
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment)
                l.push_back(Edge::segment(factor * e.a, factor * e.b));
            else
                l.push_back(Edge::arc(factor * e.center, factor * e.radius, e.start, e.sweep));
        }
        out.loops.push_back(std::move(l));
    }
    return out;
}

// ---------------------------------------------------------------- validation

std::vector<std::string> validate(const ArcRegion& region) {
    std::vector<std::string> out;
    if (region.loops.empty()) {
        out.push_back("region has no loops");
        return out;
    }
    const double tol = kClosureTol * region_scale(region);

    bool structural = false;
    for (size_t li = 0; li < region.loops.size(); ++li) {
        const Loop& loop = region.loops[li];
        const std::string tag = "loop " + std::to_string(li);
        if (loop.empty()) {
            out.push_back(tag + ": empty");
            structural = true;
            continue;
        }
        for (size_t i = 0; i < loop.size(); ++i) {
            const Edge& e = loop[i];
            if (e.kind == Edge::Kind::arc) {
                if (!(e.radius > 0.0)) {
                    out.push_back(tag + ": arc with non-positive radius");
                    structural = true;
                }
                if (!(std::abs(e.sweep) > 0.0 && std::abs(e.sweep) <= kTwoPi + 1e-12)) {
                    out.push_back(tag + ": arc sweep outside (0, 2pi]");
                    structural = true;
                }
            } else if ((e.b - e.a).norm() <= tol) {
                out.push_back(tag + ": degenerate segment");
                structural = true;
            }
            const double gap = (e.last() - loop[(i + 1) % loop.size()].first()).norm();
            if (gap > tol) {
                out.push_back(tag + ": open at edge " + std::to_string(i) + " (gap " + std::to_string(gap) + ")");
                structural = true;
            }
        }
        double a = 0.0;
        for (const auto& e : loop) a += e.green(0.0, 1.0);
        if (!(a > 0.0)) out.push_back(tag + ": non-positive signed area (loops must be CCW)");
    }
    if (structural) return out;  // geometry below assumes closed, well-formed loops

    // self/mutual intersection on a flattened proxy
    struct Seg {
        Vec2 a, b;
        size_t loop, edge;
    };
    std::vector<Seg> segs;
    for (size_t li = 0; li < region.loops.size(); ++li)
        for (size_t ei = 0; ei < region.loops[li].size(); ++ei) {
            const Edge& e = region.loops[li][ei];
            const int n = e.kind == Edge::Kind::segment ? 1 : 64;
            for (int i = 0; i < n; ++i)
                segs.push_back({e.point_at(double(i) / n), e.point_at(double(i + 1) / n), li, ei});
        }
    const double itol = 10.0 * tol;
    for (size_t i = 0; i < segs.size(); ++i)
        for (size_t j = i + 1; j < segs.size(); ++j) {
            if ((segs[i].b - segs[j].a).norm() <= itol || (segs[j].b - segs[i].a).norm() <= itol)
                continue;  // consecutive pieces share an endpoint
            const Vec2 d1 = segs[i].b - segs[i].a, d2 = segs[j].b - segs[j].a;
            const double den = cross2(d1, d2);
            if (std::abs(den) < 1e-14) continue;
            const double s = cross2(segs[j].a - segs[i].a, d2) / den;
            const double t = cross2(segs[j].a - segs[i].a, d1) / den;
            const double m = 1e-6;
            if (s > m && s < 1.0 - m && t > m && t < 1.0 - m) {
                out.push_back("self-intersection near (" + std::to_string((segs[i].a + s * d1).x()) + ", " +
                              std::to_string((segs[i].a + s * d1).y()) + ")");
                return out;
            }
        }

    // nested loops would be holes, which are unsupported
    for (size_t i = 0; i < region.loops.size(); ++i)
        for (size_t j = 0; j < region.loops.size(); ++j)
            if (i != j) {
                ArcRegion other;
                other.loops.push_back(region.loops[j]);
                if (contains(other, region.loops[i].front().first()))
                    out.push_back("loop " + std::to_string(i) + " nested inside loop " + std::to_string(j));
            }
    return out;
}

}  // namespace qiso
