#include "qiso/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>

#include "qiso/errors.hpp"
#include "qiso/optimize.hpp"
#include "qiso/parallel.hpp"
#include "qiso/symmetrize.hpp"

namespace qiso {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kThreshold = 0.406;  // convex-minimum bound used by the exclusion lemmas

Vec2 rotate(const Vec2& p, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y());
}
}  // namespace

// ---------------------------------------------------------------- ovals

FamilyReport oval_metrics(const OvalParams& p) {
    if (!(p.eta1 > 0.0 && p.eta2 > 0.0 && p.eta1 + p.eta2 <= kPi / 2 + 1e-7))
        throw domain_error("oval: need eta1, eta2 > 0 with eta1 + eta2 <= pi/2");
    if (!(p.eps > 0.0)) throw domain_error("oval: eps must be positive (the ball itself is excluded)");
    const double s1 = std::sin(p.eta1), s2 = std::sin(p.eta2);
    const double y1 = p.eps / (s1 * s1), y2 = p.eps / (s2 * s2);
    const double th1 = seg_angle(seg_area_ratio(p.eta1) + y1);
    const double th2 = seg_angle(seg_area_ratio(p.eta2) - y2);

    FamilyReport rep;
    rep.r0 = s1 / std::sin(th1);
    rep.r1 = std::abs(std::sin(th2)) > 1e-300 ? s2 / std::sin(th2)
                                              : std::numeric_limits<double>::infinity();
    rep.a0 = 2.0 * p.eps;
    rep.a1 = 2.0 * p.eps;
    rep.lambda = 4.0 * p.eps / kPi;
    rep.delta = (2.0 / kPi) * (perimeter_defect(p.eta1, y1) + perimeter_defect(p.eta2, -y2));
    rep.value = rep.delta / (rep.lambda * rep.lambda);
    rep.area = kPi;
    rep.perim = kTwoPi * (1.0 + rep.delta);
    return rep;
}

ArcRegion oval_construct(const OvalParams& p) {
    if (!(p.eta1 > 0.0 && p.eta2 > 0.0 && p.eta1 + p.eta2 <= kPi / 2 + 1e-7))
        throw domain_error("oval: need eta1, eta2 > 0 with eta1 + eta2 <= pi/2");
    if (!(p.eps > 0.0)) throw domain_error("oval: eps must be positive");
    const double th1 = solve_cap(p.eta1, p.eps, CapSide::outer);
    const double th2 = solve_cap(p.eta2, p.eps, CapSide::inner);
    return build_cap_set(p.eta1, th1, p.eta2, th2);
}

// ------------------------------------------------- rotationally symmetric

namespace {

void check_rotsym(const RotSymParams& p) {
    if (p.n < 2) throw domain_error("rotsym: symmetry order must be >= 2");
    const double piN = kPi / p.n;
    if (p.connected) {
        if (!(p.theta >= -1e-12 && p.theta <= piN + 1e-12 && p.alpha >= piN - 1e-12 &&
              p.alpha <= kPi + 1e-12))
            throw domain_error("rotsym connected: need 0 <= theta <= pi/N <= alpha <= pi");
    } else {
        if (!(p.theta >= -1e-12 && p.theta <= piN + 1e-12 && p.alpha > p.theta &&
              p.alpha <= kPi + 1e-12))
            throw domain_error("rotsym non-connected: need 0 <= theta <= pi/N, theta < alpha <= pi");
    }
    if (std::abs(std::sin(p.alpha)) < 1e-12 || std::abs(std::sin(p.alpha - piN)) < 1e-12)
        throw singular_error("rotsym: sin(alpha) or sin(alpha - pi/N) vanishes");
}

std::optional<double> rotsym_q(const RotSymParams& p, double value) {
    const double piN = kPi / p.n;
    const double s0 = std::sin(p.theta), s1 = std::sin(piN - p.theta);
    if (s0 < 1e-12 || s1 < 1e-12) return std::nullopt;
    if (!(p.alpha > 1e-12 && p.alpha < kPi - 1e-12)) return std::nullopt;
    if (!(p.alpha - piN > 1e-12 && p.alpha - piN < kPi - 1e-12)) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return cap_weight(p.alpha) / (s0 * s0 * s0) - cap_weight(p.alpha - piN) / (s1 * s1 * s1) -
           (32.0 * p.n / kPi) * value;
}

}  // namespace

FamilyReport connected_metrics(const RotSymParams& p) {
    check_rotsym(p);
    const double piN = kPi / p.n;
    const double st = std::sin(p.theta), sc = std::sin(piN - p.theta);

    FamilyReport rep;
    rep.r0 = st / std::sin(p.alpha);
    rep.r1 = sc / std::sin(p.alpha - piN);
    rep.a0 = st * st * seg_area_ratio(p.alpha) - seg_area(p.theta);
    rep.a1 = sc * sc * seg_area_ratio(p.alpha - piN) + seg_area(piN - p.theta);
    const double d = st * t_over_sin(p.alpha) + sc * t_over_sin(p.alpha - piN);
    rep.delta = p.n * d / kPi - 1.0;
    rep.lambda = p.n * (rep.a0 + rep.a1) / kPi;
    rep.value = rep.lambda > 0.0 ? rep.delta / (rep.lambda * rep.lambda)
                                 : std::numeric_limits<double>::infinity();
    rep.area = kPi + p.n * (rep.a0 - rep.a1);
    rep.perim = 2.0 * p.n * d;
    rep.q = rotsym_q(p, rep.value);
    return rep;
}

FamilyReport nonconnected_metrics(const RotSymParams& p) {
    check_rotsym(p);
    const double piN = kPi / p.n;
    const double st = std::sin(p.theta), sc = std::sin(piN - p.theta);

    FamilyReport rep;
    rep.r0 = st / std::sin(p.alpha);
    rep.r1 = sc / std::abs(std::sin(piN - p.alpha));
    rep.a0 = st * st * seg_area_ratio(p.alpha) - seg_area(p.theta);
    rep.a1 = sc * sc * seg_area_ratio(p.alpha - piN) + seg_area(piN - p.theta);
    const double d = st * t_over_sin(p.alpha) + sc * t_over_sin(p.alpha - piN);
    rep.delta = p.n * d / kPi + rep.r0 - 1.0;
    rep.lambda = 2.0 * p.n * rep.a0 / kPi + 2.0 * rep.r0 * rep.r0;
    rep.value = rep.lambda > 0.0 ? rep.delta / (rep.lambda * rep.lambda)
                                 : std::numeric_limits<double>::infinity();
    rep.area = kPi + p.n * (rep.a0 - rep.a1) + kPi * rep.r0 * rep.r0;
    rep.perim = 2.0 * p.n * d + kTwoPi * rep.r0;
    rep.q = rotsym_q(p, rep.value);
    const double cot = std::cos(p.alpha) / std::sin(p.alpha);
    const double u = 1.0 - p.alpha * cot;
    rep.phi = p.n * rep.r0 * u * (cot - (p.n / kPi) * u);
    return rep;
}

FamilyReport rotsym_metrics(const RotSymParams& p) {
    return p.connected ? connected_metrics(p) : nonconnected_metrics(p);
}

ArcRegion rotsym_construct(const RotSymParams& p, double spacing) {
    check_rotsym(p);
    if (!(p.theta > 1e-9)) throw domain_error("rotsym_construct: theta must be positive");
    const double piN = kPi / p.n;
    const double r0 = std::sin(p.theta) / std::sin(p.alpha);
    const Vec2 a0(std::sin(p.alpha - p.theta) / std::sin(p.alpha), 0.0);
    // the inner-arc center lies on the sector bisector, at positive
    // parameter along the line through M with direction (cos a, sin a)
    const double tb = std::sin(piN - p.theta) / std::sin(p.alpha - piN);
    const Vec2 b0(std::cos(p.theta) + tb * std::cos(p.alpha), std::sin(p.theta) + tb * std::sin(p.alpha));
    const double r1 = std::abs(tb);

    Loop loop;
    for (int k = 0; k < p.n; ++k) {
        const double phi = kTwoPi * k / p.n;
        loop.push_back(Edge::arc(rotate(a0, phi), r0, phi - p.alpha, 2.0 * p.alpha));
        if (std::abs(p.alpha - piN) < 1e-9) {
            // inner arc degenerates to the straight chord
            const Vec2 m1(std::cos(phi + p.theta), std::sin(phi + p.theta));
            const Vec2 m2(std::cos(phi + kTwoPi / p.n - p.theta), std::sin(phi + kTwoPi / p.n - p.theta));
            loop.push_back(Edge::segment(m1, m2));
        } else if (p.alpha > piN) {
            loop.push_back(Edge::arc(rotate(b0, phi), r1, phi + p.alpha + kPi, -2.0 * (p.alpha - piN)));
        } else {
            loop.push_back(Edge::arc(rotate(b0, phi), r1, phi + p.alpha, 2.0 * (piN - p.alpha)));
        }
    }
    ArcRegion region;
    region.loops.push_back(std::move(loop));
    if (!p.connected) {
        const auto [lo, hi] = bounding_box(region);
        const double cx = hi.x() + spacing + r0;
        auto far_ball = make_disk(Vec2(cx, 0.0), r0);
        region.loops.push_back(std::move(far_ball.loops.front()));
    }
    return region;
}

Angle alpha_root(int n) {
    if (n < 2) throw domain_error("alpha_root: order must be >= 2");
    auto v = [n](double a) {
        const double cot = std::cos(a) / std::sin(a);
        return cot - (n / kPi) * (1.0 - a * cot);
    };
    // v decreases from +inf to -n/pi on (0, pi/2]; the unique zero governs
    // the sign of Phi
    const double root = bisect_root(v, 1e-6, kPi / 2, 1e-13);
    for (int j = 0; j < 200; ++j) {
        const double a = root + 1e-3 + j * (kPi - 1e-4 - root - 1e-3) / 199.0;
        if (v(a) >= 0.0) throw numeric_error("alpha_root: positive factor beyond the root");
    }
    return root;
}

// ---------------------------------------------------------------- masks

namespace {

void check_mask(const MaskParams& p) {
    if (!(p.alpha >= 0.0 && p.theta >= 0.0)) throw domain_error("mask: negative parameter");
    const double theta_cap = p.extended_domain ? kPi : kPi / 2 - p.alpha;
    if (p.theta > theta_cap + 1e-12)
        throw domain_error("mask: parameters violate alpha + theta <= pi/2");
    if (!(p.x0 >= -1e-12 && p.x0 <= std::cos(p.theta) + 1e-12))
        throw domain_error("mask: x0 outside [0, cos(theta)]");
    // the central dip must stay in its half plane, otherwise the upper and
    // lower boundary arcs cross
    const double sa = std::sin(p.alpha);
    if (sa > 1e-12) {
        const double r1 = (std::cos(p.theta) - p.x0) / sa;
        if (std::sin(p.theta) + r1 * std::cos(p.alpha) < r1 - 1e-12)
            throw domain_error("mask: dip arcs cross the symmetry axis");
    }
}

}  // namespace

double mask_x0_from_area(Angle alpha, Angle theta) {
    if (!(alpha >= 0.0 && theta >= 0.0 && alpha + theta <= kPi / 2 + 1e-12))
        throw domain_error("mask: feasibility triangle requires alpha, theta >= 0, alpha + theta <= pi/2");
    const double ha = seg_area_ratio(alpha);
    const double hc = seg_area_ratio(kPi / 2 - alpha);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double aq = 0.5 * ha;
    const double bq = st + ha * ct;
    const double cq = ct * st - 0.5 * ct * ct * ha + 0.5 * st * st * hc - kPi / 4.0;

    double root = -1.0;
    if (std::abs(aq) < 1e-14) {
        if (std::abs(bq) < 1e-14) throw domain_error("mask: area equation degenerate");
        root = -cq / bq;
    } else {
        const double disc = bq * bq - 4.0 * aq * cq;
        if (disc < 0.0) throw domain_error("mask: no real x0 solves area = pi");
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (bq + (bq >= 0.0 ? sq : -sq));
        for (double cand : {qq / aq, std::abs(qq) > 1e-300 ? cq / qq : -1.0})
            if (cand >= -1e-9 && cand <= ct + 1e-9) root = cand;
    }
    if (!(root >= -1e-9 && root <= ct + 1e-9))
        throw domain_error("mask: no x0 root in [0, cos(theta)]");
    return std::clamp(root, 0.0, ct);
}

FamilyReport mask_metrics(const MaskParams& p) {
    check_mask(p);
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    if (sa < 1e-12 || ca < 1e-12) throw singular_error("mask: sin(alpha) or cos(alpha) vanishes");
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double r1 = (ct - p.x0) / sa;
    if (r1 < 1e-12) throw singular_error("mask: central arc radius vanishes (x0 -> cos(theta))");
    const double ha = seg_area_ratio(p.alpha);

    FamilyReport rep;
    rep.r0 = r1;
    rep.r1 = p.x0 / sa;
    rep.r2 = st / ca;
    rep.perim = 4.0 * (p.alpha * (p.x0 + ct) / sa - p.alpha * st / ca + kPi * st / (2.0 * ca));
    rep.area = 4.0 * (0.5 * (p.x0 * p.x0 - ct * ct) * ha + p.x0 * (st + ha * ct) + ct * st +
                      0.5 * st * st * seg_area_ratio(kPi / 2 - p.alpha));
    rep.lambda = 2.0 - (4.0 / kPi) * (2.0 * p.x0 * ha * ct + p.theta + ct * st - ha * ct * ct);
    rep.delta = rep.perim / kTwoPi - 1.0;
    rep.value = rep.lambda > 0.0 ? rep.delta / (rep.lambda * rep.lambda)
                                 : std::numeric_limits<double>::infinity();
    rep.a0 = 0.5 * rep.lambda * kPi;  // |M \ B1| = |B1 \ M| for the area-matched ball
    rep.a1 = rep.a0;
    return rep;
}

ArcRegion mask_construct(const MaskParams& p) {
    check_mask(p);
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    if (sa < 1e-12 || ca < 1e-12) throw singular_error("mask: sin(alpha) or cos(alpha) vanishes");
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double r1 = (ct - p.x0) / sa;
    const double r2 = p.x0 / sa;
    const double r3 = st / ca;
    if (r1 < 1e-12) throw singular_error("mask: central arc radius vanishes");
    const double y1 = st + r1 * ca;           // center height of the dip arcs
    const double y2 = st - r2 * ca;           // center height of the transition arcs
    const double x3 = p.x0 + std::cos(p.alpha + p.theta) / ca;
    const double half = kPi / 2 - p.alpha;

    Loop loop;
    auto add = [&](const Vec2& c, double r, double start, double sweep) {
        if (r > 1e-12 && std::abs(sweep) > 1e-12) loop.push_back(Edge::arc(c, r, start, sweep));
    };
    add(Vec2(x3, 0.0), r3, -half, 2.0 * half);             // right bump
    add(Vec2(ct, y2), r2, half, 2.0 * p.alpha);            // upper right transition
    add(Vec2(0.0, y1), r1, p.alpha - kPi / 2, -2.0 * p.alpha);  // top dip (clockwise)
    add(Vec2(-ct, y2), r2, half, 2.0 * p.alpha);           // upper left transition
    add(Vec2(-x3, 0.0), r3, kPi / 2 + p.alpha, 2.0 * half);     // left bump
    add(Vec2(-ct, -y2), r2, -kPi / 2 - p.alpha, 2.0 * p.alpha); // lower left transition
    add(Vec2(0.0, -y1), r1, kPi / 2 + p.alpha, -2.0 * p.alpha); // bottom dip
    add(Vec2(ct, -y2), r2, -kPi / 2 - p.alpha, 2.0 * p.alpha);  // lower right transition

    ArcRegion region;
    region.loops.push_back(std::move(loop));
    return region;
}

MaskOptimum mask_optimize(int lattice) {
    if (lattice < 2) throw domain_error("mask_optimize: lattice must be >= 2");
    auto objective = [](const std::array<double, 2>& at) -> double {
        try {
            const double x0 = mask_x0_from_area(at[0], at[1]);
            const auto rep = mask_metrics({at[0], at[1], x0});
            if (!(rep.lambda > 1e-9)) return std::numeric_limits<double>::infinity();
            return kTwoPi * rep.value;  // J = (P - 2pi)/lambda^2
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::array<double, 2> best{0, 0};
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < lattice; ++i) {
        const double alpha = 0.01 + (kPi / 2 - 0.03) * (i + 0.5) / lattice;
        for (int j = 0; j < lattice; ++j) {
            const double span = kPi / 2 - alpha - 0.02;
            if (span <= 0.0) continue;
            const double theta = 0.01 + span * (j + 0.5) / lattice;
            const auto res = nelder_mead_2d(objective, {alpha, theta}, 0.04, 1e-7, 1e-13, 600);
            if (res.value < best_val) {
                best_val = res.value;
                best = res.x;
            }
        }
    }
    const auto polish = nelder_mead_2d(objective, best, 2e-4, 1e-11, 1e-16, 6000);

    MaskOptimum out;
    out.params.alpha = polish.x[0];
    out.params.theta = polish.x[1];
    out.params.x0 = mask_x0_from_area(out.params.alpha, out.params.theta);
    out.report = mask_metrics(out.params);
    return out;
}

// -------------------------------------------------------------- stadiums

ArcRegion stadium_construct(double aspect) {
    if (!(aspect >= 0.0)) throw domain_error("stadium: aspect must be non-negative");
    const double r = std::sqrt(kPi / (4.0 * aspect + kPi));
    const double len = aspect * r;
    if (len < 1e-12) return make_disk(Vec2(0, 0), r);
    ArcRegion region;
    region.loops.push_back({Edge::segment(Vec2(-len, -r), Vec2(len, -r)),
                            Edge::arc(Vec2(len, 0.0), r, -kPi / 2, kPi),
                            Edge::segment(Vec2(len, r), Vec2(-len, r)),
                            Edge::arc(Vec2(-len, 0.0), r, kPi / 2, kPi)});
    return region;
}

StadiumOptimum stadium_optimize() {
    // the optimal ball sits at the symmetry center (two perpendicular
    // symmetry axes), so one symmetric-difference evaluation gives lambda
    auto eval = [](double a) {
        const auto region = stadium_construct(a);
        const double lam = symm_diff_area(region, Ball{Vec2(0, 0), 1.0}) / kPi;
        return deficit(region) / (lam * lam);
    };
    const double lo = 0.02, hi = 2.0;
    const int coarse = 120;
    int best_i = 1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= coarse; ++i) {
        const double a = lo + (hi - lo) * i / coarse;
        const double v = eval(a);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }
    const double a_lo = lo + (hi - lo) * std::max(0, best_i - 1) / coarse;
    const double a_hi = lo + (hi - lo) * std::min(coarse, best_i + 1) / coarse;
    const auto [aspect, value] = golden_section(eval, a_lo, a_hi, 1e-10);

    StadiumOptimum out;
    out.aspect = aspect;
    out.value = value;
    out.cap_radius = std::sqrt(kPi / (4.0 * aspect + kPi));
    out.half_length = aspect * out.cap_radius;
    const auto region = stadium_construct(aspect);
    out.lambda = symm_diff_area(region, Ball{Vec2(0, 0), 1.0}) / kPi;
    out.delta = deficit(region);
    return out;
}

// ----------------------------------------------------------- conditions

ConditionReport condition_check(const FamilyReport& rep, const RotSymParams& p, double tol) {
    ConditionReport out;
    out.balance = rep.a0 - rep.a1 + (p.connected ? 0.0 : (kPi / p.n) * rep.r0 * rep.r0);
    out.curvature = 1.0 / rep.r0 + 1.0 / rep.r1 - 8.0 * rep.delta / rep.lambda;
    out.below_threshold = rep.value - kThreshold;
    out.q = rep.q;
    out.phi = rep.phi;
    if (std::abs(out.balance) <= tol) out.satisfied.push_back("area-balance");
    if (std::abs(out.curvature) <= tol) out.satisfied.push_back("curvature-sum");
    if (out.below_threshold < 0.0) out.satisfied.push_back("below-0.406");
    if (out.q && *out.q >= -tol) out.satisfied.push_back("second-order-Q");
    if (out.phi && *out.phi >= -tol) out.satisfied.push_back("component-exchange-Phi");
    return out;
}

std::optional<CriticalCandidate> connected_critical_point(int n) {
    const double piN = kPi / n;
    // theta solving A0 = A1 at fixed alpha; the imbalance is monotone
    // enough for bisection over the admissible chord angles
    auto balanced_theta = [&](double alpha) -> std::optional<double> {
        auto imb = [&](double th) {
            const auto rep = connected_metrics({n, th, alpha, true});
            return rep.a0 - rep.a1;
        };
        double lo = 1e-7, hi = piN - 1e-7;
        if (imb(lo) * imb(hi) > 0.0) return std::nullopt;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (imb(mid) * imb(lo) > 0.0) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto curvature = [&](double alpha) -> double {
        const auto th = balanced_theta(alpha);
        if (!th) return std::numeric_limits<double>::infinity();
        const auto rep = connected_metrics({n, *th, alpha, true});
        return std::abs(1.0 / rep.r0 + 1.0 / rep.r1 - 8.0 * rep.delta / rep.lambda);
    };

    const double alo = piN + 1e-5, ahi = kPi - 1e-3;
    double best_alpha = -1.0, best_curv = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 64; ++j) {
        const double a = alo + (ahi - alo) * j / 64.0;
        const double c = curvature(a);
        if (c < best_curv) {
            best_curv = c;
            best_alpha = a;
        }
    }
    if (best_alpha < 0.0) return std::nullopt;
    const double window = (ahi - alo) / 64.0;
    const auto [alpha, curv] = golden_section(curvature, std::max(alo, best_alpha - window),
                                              std::min(ahi, best_alpha + window), 1e-10);
    const auto th = balanced_theta(alpha);
    if (!th) return std::nullopt;

    CriticalCandidate out;
    out.params = RotSymParams{n, *th, alpha, true};
    const auto rep = connected_metrics(out.params);
    out.balance_residual = rep.a0 - rep.a1;
    out.curvature_residual = 1.0 / rep.r0 + 1.0 / rep.r1 - 8.0 * rep.delta / rep.lambda;
    (void)curv;
    return out;
}

// ------------------------------------------------------------ lemma scans

namespace {

constexpr double kInset = 1e-4;

// Pointwise quantities of a hypothetical one-ball optimal set with these
// parameters. At a true optimum lambda equals each of its closed forms and
// never exceeds 2, so their minimum bounds it above and f_lb bounds the
// functional below.
struct BoundVals {
    double r0, r1, a0, a1, dhat, curv_sum, lam_tilde, f_lb;
};

BoundVals bound_values(bool connected, int n, double theta, double alpha) {
    const double piN = kPi / n;
    BoundVals v{};
    const double st = std::sin(theta), sc = std::sin(piN - theta);
    v.r0 = st / std::sin(alpha);
    v.r1 = sc / std::abs(std::sin(alpha - piN));
    v.a0 = st * st * seg_area_ratio(alpha) - seg_area(theta);
    v.a1 = sc * sc * seg_area_ratio(alpha - piN) + seg_area(piN - theta);
    const double d = st * t_over_sin(alpha) + sc * t_over_sin(alpha - piN);
    v.curv_sum = 1.0 / v.r0 + 1.0 / v.r1;
    if (connected) {
        v.dhat = n * d / kPi - 1.0;
        v.lam_tilde = std::min({2.0, 2.0 * n * v.a0 / kPi, 2.0 * n * v.a1 / kPi});
    } else {
        v.dhat = n * d / kPi + v.r0 - 1.0;
        v.lam_tilde = std::min({2.0, 2.0 * n * v.a0 / kPi + 2.0 * v.r0 * v.r0, 2.0 * n * v.a1 / kPi});
    }
    const double k = v.curv_sum / 8.0;  // delta/lambda under the curvature condition
    v.f_lb = std::max(k / v.lam_tilde, v.dhat / (v.lam_tilde * v.lam_tilde));
    return v;
}

double q_bound(int n, double theta, double alpha, double f_lb) {
    const double piN = kPi / n;
    const double s0 = std::sin(theta), s1 = std::sin(piN - theta);
    return cap_weight(alpha) / (s0 * s0 * s0) - cap_weight(alpha - piN) / (s1 * s1 * s1) -
           (32.0 * n / kPi) * f_lb;
}

double phi_value(int n, double theta, double alpha) {
    const double r0 = std::sin(theta) / std::sin(alpha);
    const double cot = std::cos(alpha) / std::sin(alpha);
    const double u = 1.0 - alpha * cot;
    return n * r0 * u * (cot - (n / kPi) * u);
}

struct LemmaPlan {
    std::vector<int> ns;
    bool connected = true;
    // ranges may depend on n and theta; empty optional filters the point out
    std::function<std::pair<double, double>(int)> theta_range;
    std::function<std::pair<double, double>(int, double /*theta*/)> alpha_range;
    std::function<std::optional<double>(int, double, double)> margin;
};

std::vector<int> range_n(int lo, int hi) {
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

double alpha_root_cached(int n) {
    static std::mutex m;
    static std::vector<double> cache;
    std::lock_guard<std::mutex> lock(m);
    if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1, -1.0);
    if (cache[n] < 0.0) cache[n] = alpha_root(n);
    return cache[n];
}

LemmaPlan make_plan(const std::string& id) {
    LemmaPlan p;
    auto theta_low = [](int n) { return std::pair<double, double>{0.0, kPi / (2.0 * n)}; };
    auto theta_high = [](int n) { return std::pair<double, double>{kPi / (2.0 * n), kPi / n}; };
    auto margin_f = [](int n, double t, double a) -> std::optional<double> {
        return bound_values(true, n, t, a).f_lb - kThreshold;
    };
    auto margin_f_nc = [](int n, double t, double a) -> std::optional<double> {
        return bound_values(false, n, t, a).f_lb - kThreshold;
    };
    auto margin_q = [](int n, double t, double a) -> std::optional<double> {
        return -q_bound(n, t, a, bound_values(true, n, t, a).f_lb);
    };

    if (id == "L44") {
        p = {range_n(4, 20), true, theta_high,
             [](int n, double) { return std::pair{kPi / n, kPi}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(true, n, t, a);
                 return v.a0 - v.a1;
             }};
    } else if (id == "L45") {
        p = {range_n(4, 20), true, theta_low,
             [](int n, double) { return std::pair{kPi / n, kPi / 2}; }, margin_f};
    } else if (id == "L47") {
        p = {range_n(4, 20), true, theta_low,
             [](int n, double) { return std::pair{kPi / 2, kPi / 2 + kPi / n}; }, margin_q};
    } else if (id == "L48") {
        p = {range_n(17, 40), true, theta_low,
             [](int, double) { return std::pair{3 * kPi / 4, kPi}; }, margin_f};
    } else if (id == "L49") {
        p = {range_n(8, 20), true, theta_low,
             [](int n, double) { return std::pair{kPi / 2 + kPi / n, 3 * kPi / 4}; }, margin_f};
    } else if (id == "L411i") {
        p = {range_n(4, 16), true, theta_low,
             [](int, double) { return std::pair{3 * kPi / 4, kPi}; }, margin_q};
    } else if (id == "L411ii") {
        p = {range_n(5, 7), true, theta_low,
             [](int n, double) { return std::pair{kPi / 2 + kPi / n, 3 * kPi / 4}; }, margin_q};
    } else if (id == "L412-1") {
        p = {{3}, true, theta_low, [](int, double) { return std::pair{kPi / 3, kPi / 2}; }, margin_f};
    } else if (id == "L412-2") {
        p = {{3}, true, theta_low, [](int, double) { return std::pair{kPi / 2, 5 * kPi / 6}; }, margin_q};
    } else if (id == "L412-3") {
        p = {{3}, true, [](int) { return std::pair{0.0, kPi / 12}; },
             [](int, double) { return std::pair{5 * kPi / 6, kPi}; },
             [](int n, double t, double a) -> std::optional<double> {
                 return bound_values(true, n, t, a).a1 - kPi / 3;
             }};
    } else if (id == "L412-4") {
        p = {{3}, true, [](int) { return std::pair{kPi / 12, kPi / 6}; },
             [](int, double) { return std::pair{5 * kPi / 6, kPi}; }, margin_q};
    } else if (id == "L412-5") {
        p = {{3}, true, [](int) { return std::pair{kPi / 6, kPi / 3}; },
             [](int, double) { return std::pair{kPi / 3, kPi}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(true, n, t, a);
                 return v.a0 - v.a1;
             }};
    } else if (id == "L413") {
        p = {{2}, true, [](int) { return std::pair{0.0, kPi / 2}; },
             [](int, double) { return std::pair{kPi / 2, kPi}; }, margin_q};
    } else if (id == "L415") {
        p = {range_n(2, 10), false, theta_low,
             [](int n, double) { return std::pair{alpha_root_cached(n) + 1e-3, kPi}; },
             [](int n, double t, double a) -> std::optional<double> { (void)t; return -phi_value(n, t, a); }};
    } else if (id == "L416") {
        p = {range_n(3, 10), false, theta_high,
             [](int, double t) { return std::pair{t, kPi}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(false, n, t, a);
                 return v.a0 - v.a1 + (kPi / n) * v.r0 * v.r0;
             }};
    } else if (id == "L417") {
        p = {range_n(3, 10), false, theta_low,
             [](int n, double) { return std::pair{kPi / n, alpha_root_cached(n)}; }, margin_f_nc};
    } else if (id == "L418") {
        p = {range_n(3, 10), false, theta_low,
             [](int n, double t) { return std::pair{t, kPi / n}; }, margin_f_nc};
    } else if (id == "L419-1") {
        p = {{2}, false, theta_low,
             [](int, double) { return std::pair{alpha_root_cached(2) + 1e-3, kPi}; },
             [](int n, double t, double a) -> std::optional<double> { return -phi_value(n, t, a); }};
    } else if (id == "L419-2") {
        p = {{2}, false, [](int) { return std::pair{kPi / 4, kPi / 2}; },
             [](int, double t) { return std::pair{t, kPi / 2}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(false, n, t, a);
                 return v.a0 - v.a1 + (kPi / n) * v.r0 * v.r0;
             }};
    } else if (id == "L419-3") {
        p = {{2}, false, [](int) { return std::pair{0.0, kPi / 6}; },
             [](int, double t) { return std::pair{t, kPi / 6}; }, margin_f_nc};
    } else if (id == "L419-4") {
        p = {{2}, false, [](int) { return std::pair{0.0, kPi / 4}; },
             [](int, double t) { return std::pair{std::max(t, kPi / 6), alpha_root_cached(2)}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(false, n, t, a);
                 if (v.r0 > 0.45) return std::nullopt;
                 return -(v.a0 - v.a1 + (kPi / n) * v.r0 * v.r0);
             }};
    } else if (id == "L419-5") {
        p = {{2}, false, [](int) { return std::pair{0.0, kPi / 4}; },
             [](int, double t) { return std::pair{std::max(t, kPi / 6), alpha_root_cached(2)}; },
             [](int n, double t, double a) -> std::optional<double> {
                 const auto v = bound_values(false, n, t, a);
                 if (v.r0 < 0.45) return std::nullopt;
                 return v.f_lb - kThreshold;
             }};
    } else {
        throw domain_error("unknown lemma id: " + id);
    }
    return p;
}

}  // namespace

std::vector<std::string> lemma_ids() {
    return {"L44",     "L45",     "L47",     "L48",     "L49",     "L411i",  "L411ii",
            "L412-1",  "L412-2",  "L412-3",  "L412-4",  "L412-5",  "L413",   "L415",
            "L416",    "L417",    "L418",    "L419-1",  "L419-2",  "L419-3", "L419-4",
            "L419-5"};
}

ScanReport lemma_scan(const std::string& lemma_id, int grid, unsigned threads) {
    if (grid < 2) throw domain_error("lemma_scan: grid must be >= 2");
    const auto plan = make_plan(lemma_id);

    struct Row {
        int n;
        double theta;
    };
    std::vector<Row> rows;
    for (int n : plan.ns) {
        auto [tlo, thi] = plan.theta_range(n);
        tlo += kInset;
        thi -= kInset;
        if (thi <= tlo) continue;
        for (int i = 0; i < grid; ++i)
            rows.push_back({n, tlo + (thi - tlo) * i / (grid - 1)});
    }

    struct RowResult {
        double worst = 1e300;
        double worst_alpha = 0.0;
        long points = 0;
        std::vector<ScanFailure> failures;
    };
    std::vector<RowResult> results(rows.size());

    parallel_for(rows.size(), threads, [&](size_t ri) {
        const auto& row = rows[ri];
        auto& res = results[ri];
        auto [alo, ahi] = plan.alpha_range(row.n, row.theta);
        alo += kInset;
        ahi -= kInset;
        if (ahi <= alo) return;
        for (int j = 0; j < grid; ++j) {
            const double alpha = alo + (ahi - alo) * j / (grid - 1);
            const auto m = plan.margin(row.n, row.theta, alpha);
            if (!m) continue;
            ++res.points;
            if (*m < res.worst) {
                res.worst = *m;
                res.worst_alpha = alpha;
            }
            if (*m <= 0.0 && res.failures.size() < 32)
                res.failures.push_back({row.n, row.theta, alpha, *m});
        }
    });

    ScanReport out;
    out.lemma = lemma_id;
    out.grid = grid;
    out.worst_margin = 1e300;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& res = results[i];
        out.points += res.points;
        if (res.points > 0 && res.worst < out.worst_margin) {
            out.worst_margin = res.worst;
            out.worst_n = rows[i].n;
            out.worst_theta = rows[i].theta;
            out.worst_alpha = res.worst_alpha;
        }
        for (const auto& f : res.failures)
            if (out.failures.size() < 32) out.failures.push_back(f);
    }
    out.passed = out.points > 0 && out.failures.empty() && out.worst_margin > 0.0;
    return out;
}

// ------------------------------------------------------------------ soak

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    // 53-bit mantissa draw; avoids implementation-defined distributions
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

ArcRegion random_mask(std::mt19937_64& rng) {
    for (int tries = 0; tries < 64; ++tries) {
        const double alpha = uniform(rng, 0.12, 0.9);
        const double span = kPi / 2 - alpha - 0.06;
        if (span < 0.12) continue;
        const double theta = uniform(rng, 0.1, 0.1 + span - 0.02);
        try {
            const double x0 = mask_x0_from_area(alpha, theta);
            MaskParams p{alpha, theta, x0};
            if (x0 < 1e-3 || x0 > std::cos(theta) - 1e-3) continue;
            return mask_construct(p);
        } catch (const std::exception&) {
            // infeasible draw (no x0 root or crossing dips): resample
        }
    }
    throw numeric_error("random_mask: no feasible sample");
}

ArcRegion random_oval(std::mt19937_64& rng) {
    for (int tries = 0; tries < 64; ++tries) {
        const double e1 = uniform(rng, 0.25, 1.1);
        const double hi2 = kPi / 2 - e1 - 0.05;
        if (hi2 < 0.2) continue;
        const double e2 = uniform(rng, 0.15, hi2);
        const double s2 = std::sin(e2), s1 = std::sin(e1);
        const double cap_in = s2 * s2 * (seg_area_ratio(e2) + seg_area_ratio(kPi / 2 - 0.05));
        const double cap_out = s1 * s1 * (seg_area_ratio(2.0) - seg_area_ratio(e1));
        const double eps = std::min(std::pow(10.0, uniform(rng, -3.5, -0.8)),
                                    0.8 * std::min(cap_in, cap_out));
        if (!(eps > 0.0)) continue;
        return oval_construct({e1, e2, eps});
    }
    throw numeric_error("random_oval: no feasible sample");
}

}  // namespace

ArcRegion random_bump_ball(std::mt19937_64& rng, double eps) {
    const int k = 1 + static_cast<int>(rng() % 6);
    const double slot = kTwoPi / k;
    std::vector<double> axes(k), etas(k), weights(k);
    std::vector<int> sides(k);
    double wsum = 0.0;
    bool side = (rng() & 1) != 0;
    for (int i = 0; i < k; ++i) {
        const double jitter = k > 1 ? uniform(rng, -0.1, 0.1) * slot : 0.0;
        axes[i] = i * slot + jitter;
        etas[i] = uniform(rng, 0.1, std::min(0.42, 0.25 * slot));
        weights[i] = uniform(rng, 0.6, 1.4);
        wsum += weights[i];
        sides[i] = side ? +1 : -1;
        side = (rng() & 1) != 0;
    }

    Loop loop;
    double prev_end = axes[k - 1] + etas[k - 1] - kTwoPi;  // end angle of the last cap, unwound
    for (int i = 0; i < k; ++i) {
        const double gap = (axes[i] - etas[i]) - prev_end;
        if (gap > 1e-9) loop.push_back(Edge::arc(Vec2(0, 0), 1.0, prev_end, gap));
        double a = 4.0 * eps * weights[i] / wsum;
        const double s = std::sin(etas[i]);
        const double cap = 0.9 * s * s *
                           (sides[i] > 0 ? seg_area_ratio(kPi / 2 - 0.02) - seg_area_ratio(etas[i])
                                         : seg_area_ratio(etas[i]) + seg_area_ratio(kPi / 2 - 0.02));
        a = std::min(a, cap);
        const double theta = solve_cap(etas[i], a, sides[i] > 0 ? CapSide::outer : CapSide::inner);
        append_cap(loop, etas[i], theta, axes[i], sides[i]);
        prev_end = axes[i] + etas[i];
    }
    ArcRegion region;
    region.loops.push_back(std::move(loop));
    const double a = area(region);
    return scale_region(region, std::sqrt(kPi / a));
}

ArcRegion random_shape(std::uint64_t seed, int index, std::string* kind) {
    if (seed == 0) {
        if (kind) *kind = "mask-conjectured-optimum";
        const MaskParams p{0.2686247, 0.5285017, mask_x0_from_area(0.2686247, 0.5285017)};
        return mask_construct(p);
    }
    if (seed == 1) {
        if (kind) *kind = "stadium-optimum";
        static std::once_flag once;
        static double aspect = 0.0;
        std::call_once(once, [] { aspect = stadium_optimize().aspect; });
        return stadium_construct(aspect);
    }
    std::mt19937_64 rng(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(index) + 1)));
    switch (index % 4) {
        case 0: {
            if (kind) *kind = "bump-ball";
            return random_bump_ball(rng, std::pow(10.0, uniform(rng, -3.0, -0.6)));
        }
        case 1: {
            if (kind) *kind = "mask";
            return random_mask(rng);
        }
        case 2: {
            if (kind) *kind = "oval";
            return random_oval(rng);
        }
        default: {
            if (kind) *kind = "two-component";
            const double rho = uniform(rng, 0.15, 0.5);
            ArcRegion main = random_bump_ball(rng, std::pow(10.0, uniform(rng, -2.5, -0.8)));
            main = scale_region(main, std::sqrt(1.0 - rho * rho));
            const auto [lo, hi] = bounding_box(main);
            auto far_ball = make_disk(Vec2(hi.x() + 1.5 + rho, 0.0), rho);
            main.loops.push_back(std::move(far_ball.loops.front()));
            return main;
        }
    }
}

SoakReport soak_random(int n, std::uint64_t seed, const SearchConfig& config, unsigned threads) {
    if (n < 1) throw domain_error("soak_random: need n >= 1");
    SoakReport out;
    out.n = n;
    out.seed = seed;

    std::vector<SoakSample> samples(n);
    SearchConfig cfg = config;
    cfg.threads = 1;  // parallelism lives at the sample level
    parallel_for(static_cast<size_t>(n), threads, [&](size_t i) {
        auto& s = samples[i];
        s.index = static_cast<int>(i);
        const auto region = random_shape(seed, static_cast<int>(i), &s.kind);
        const auto fr = functional(region, cfg);
        s.value = fr.value;
        s.delta = fr.delta;
        s.lambda = fr.lambda;
    });

    out.min_value = 1e300;
    out.worst_ratio = 0.0;
    for (const auto& s : samples) {
        if (s.value < out.min_value) {
            out.min_value = s.value;
            out.min_index = s.index;
            out.min_kind = s.kind;
        }
        if (s.delta > 0.0) out.worst_ratio = std::max(out.worst_ratio, s.lambda * s.lambda / s.delta);
        if (s.value < 0.3931397 - 1e-3) out.anomalies.push_back(s);
    }
    out.passed = out.anomalies.empty() && out.worst_ratio <= 2.5437;
    return out;
}

}  // namespace qiso
