#include "qiso/fraenkel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qiso/errors.hpp"
#include "qiso/parallel.hpp"

namespace qiso {

namespace {
constexpr double kPi = std::numbers::pi;
}

double matched_radius(const ArcRegion& region) {
    const double a = area(region);
    if (!(a > 0.0)) throw domain_error("matched_radius: region area must be positive");
    return std::sqrt(a / kPi);
}

double psi(const ArcRegion& region, const Vec2& center) {
    return symm_diff_area(region, Ball{center, matched_radius(region)});
}

namespace {

Vec2 gradient_from_clip(const CircleClip& clip, const Ball& ball) {
    // d|region ∩ B|/dc = integral of the ball normal over the inside arcs;
    // psi = |region| + |B| - 2 |region ∩ B| flips the sign and doubles it.
    double gx = 0.0, gy = 0.0;
    const double r = ball.radius;
    for (const auto& [a0, a1] : clip.inside_arcs) {
        gx += r * (std::sin(a1) - std::sin(a0));
        gy += r * (std::cos(a0) - std::cos(a1));
    }
    return Vec2(-2.0 * gx, -2.0 * gy);
}

}  // namespace

Vec2 psi_gradient(const ArcRegion& region, const Vec2& center) {
    const Ball ball{center, matched_radius(region)};
    const auto clip = clip_with_ball(region, ball);
    if (clip.tangential)
        throw transversality_error("psi_gradient: non-transversal center");
    return gradient_from_clip(clip, ball);
}

namespace {

struct Candidate {
    double value = 0.0;
    Vec2 center{0, 0};
    bool stationary = false;
};

// One gradient descent with backtracking line search. Non-transversal
// centers are nudged through a fixed direction sequence; at kinks the
// step collapses and the best point so far is kept.
Candidate descend(const ArcRegion& region, const Ball& ball0, Vec2 c, double area_region,
                  const SearchConfig& cfg) {
    const double r = ball0.radius;
    auto value_at = [&](const Vec2& p) { return symm_diff_area(region, Ball{p, r}); };

    double fc = value_at(c);
    double step = r / 8.0;
    bool stationary = false;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        Vec2 g;
        bool have_g = false;
        Vec2 cp = c;
        for (int k = 0; k < 8 && !have_g; ++k) {
            try {
                const auto clip = clip_with_ball(region, Ball{cp, r});
                if (clip.tangential) throw transversality_error("tangential");
                g = gradient_from_clip(clip, Ball{cp, r});
                have_g = true;
            } catch (const transversality_error&) {
                const double a = 0.57721566 + k * 2.39996322972865332;
                cp = c + 1e-7 * Vec2(std::cos(a), std::sin(a));
            }
        }
        if (!have_g) break;
        if (have_g && (cp - c).squaredNorm() > 0.0) {
            const double fcp = value_at(cp);
            if (fcp <= fc) { c = cp; fc = fcp; }
        }

        const double gnorm = g.norm();
        if (gnorm <= cfg.grad_tol) {
            stationary = true;
            break;
        }
        const Vec2 dir = -g / gnorm;

        double t = step;
        bool accepted = false;
        while (t > 1e-16 * r) {
            const Vec2 c2 = c + t * dir;
            const double f2 = value_at(c2);
            if (f2 <= fc - 1e-4 * t * gnorm) {
                c = c2;
                fc = f2;
                step = std::min(2.0 * t, r);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // kink or flat: converged as far as psi resolves
    }
    (void)area_region;
    return {fc, c, stationary};
}

}  // namespace

AsymmetryResult optimal_balls(const ArcRegion& region, const SearchConfig& cfg) {
    const double a = area(region);
    if (!(a > 0.0)) throw domain_error("optimal_balls: degenerate region (area <= 0)");
    const double r = std::sqrt(a / kPi);
    const Ball ball{Vec2(0, 0), r};

    // deterministic start set
    std::vector<Vec2> starts;
    starts.push_back(centroid(region));
    if (region.loops.size() > 1)
        for (const auto& loop : region.loops) starts.push_back(loop_centroid(loop));
    const auto [lo, hi] = bounding_box(region);
    const Vec2 mid = 0.5 * (lo + hi);
    const Vec2 half = 0.5 * (hi - lo) + Vec2(r, r);
    const double pitch = std::max(1e-6, cfg.grid_pitch_factor * r);
    const int kx = static_cast<int>(std::ceil(half.x() / pitch));
    const int ky = static_cast<int>(std::ceil(half.y() / pitch));
    for (int i = -kx; i <= kx; ++i)
        for (int j = -ky; j <= ky; ++j)
            starts.emplace_back(mid.x() + i * pitch, mid.y() + j * pitch);

    std::vector<double> start_values(starts.size());
    parallel_for(starts.size(), cfg.threads, [&](size_t i) {
        start_values[i] = symm_diff_area(region, Ball{starts[i], r});
    });

    std::vector<size_t> order(starts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        if (start_values[i] != start_values[j]) return start_values[i] < start_values[j];
        if (starts[i].x() != starts[j].x()) return starts[i].x() < starts[j].x();
        return starts[i].y() < starts[j].y();
    });

    const double plateau = a + kPi * r * r - 1e-12;
    std::vector<Vec2> chosen;
    for (size_t idx : order) {
        if (static_cast<int>(chosen.size()) >= std::max(1, cfg.max_descents)) break;
        if (start_values[idx] >= plateau && !chosen.empty()) continue;  // no overlap: psi is flat there
        chosen.push_back(starts[idx]);
    }

    std::vector<Candidate> cands(chosen.size());
    parallel_for(chosen.size(), cfg.threads, [&](size_t i) {
        cands[i] = descend(region, ball, chosen[i], a, cfg);
    });

    double best = 1e300;
    for (const auto& c : cands) best = std::min(best, c.value);

    const double vtol = cfg.value_tol_factor * a;
    std::vector<Candidate> near;
    for (const auto& c : cands)
        if (c.value <= best + vtol) near.push_back(c);
    std::sort(near.begin(), near.end(), [](const Candidate& x, const Candidate& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.center.x() != y.center.x()) return x.center.x() < y.center.x();
        return x.center.y() < y.center.y();
    });

    AsymmetryResult out;
    out.psi_at_optimum = best;
    out.lambda = std::max(0.0, best / a);
    for (const auto& c : near) {
        bool dup = false;
        for (const auto& kept : out.optimal_centers)
            if ((kept - c.center).norm() <= cfg.dedup_tol) { dup = true; break; }
        if (!dup) out.optimal_centers.push_back(c.center);
    }
    return out;
}

double deficit(const ArcRegion& region) {
    const double a = area(region);
    if (!(a > 0.0)) throw domain_error("deficit: region area must be positive");
    const double pb = 2.0 * std::sqrt(kPi * a);
    const double d = (perimeter(region) - pb) / pb;
    if (d < -1e-10)
        throw numeric_error("deficit: isoperimetric inequality violated beyond noise (invalid region?)");
    return std::max(0.0, d);
}

FunctionalResult functional(const ArcRegion& region, const SearchConfig& cfg) {
    FunctionalResult out;
    out.delta = deficit(region);
    const auto asym = optimal_balls(region, cfg);
    out.lambda = asym.lambda;
    if (out.lambda <= cfg.lambda_floor)
        throw near_ball_error("functional: asymmetry below floor; delta/lambda^2 is ill-conditioned");
    out.value = out.delta / (out.lambda * out.lambda);
    return out;
}

}  // namespace qiso
