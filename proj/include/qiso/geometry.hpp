#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace qiso {

using Vec2 = Eigen::Vector2d;

// Geometric tolerances on unit-scale inputs: loop closure, tangency
// detection and on-boundary classification all share the same scale,
// well above 64-bit noise and well below every acceptance tolerance.
constexpr double kClosureTol = 1e-9;
constexpr double kTangencyTol = 1e-9;

// One piece of a region boundary: a straight segment or a circular arc.
// Arcs are stored as (center, radius, start angle, signed sweep); sweep > 0
// runs counter-clockwise. |sweep| lies in (0, 2pi].
struct Edge {
    enum class Kind { segment, arc };
    Kind kind = Kind::segment;

    Vec2 a{0, 0}, b{0, 0};        // segment endpoints
    Vec2 center{0, 0};            // arc fields
    double radius = 0.0;
    double start = 0.0;
    double sweep = 0.0;

    static Edge segment(const Vec2& from, const Vec2& to);
    static Edge arc(const Vec2& center, double radius, double start, double sweep);

    Vec2 point_at(double t) const;    // t in [0, 1] along the traversal
    Vec2 tangent_at(double t) const;  // unit tangent in traversal direction
    Vec2 first() const { return point_at(0.0); }
    Vec2 last() const { return point_at(1.0); }
    double length() const;

    // Integral of (x dy - y dx)/2 over the sub-piece [t0, t1]; summing
    // these over a closed CCW loop gives its area exactly.
    double green(double t0, double t1) const;
};

using Loop = std::vector<Edge>;

// A closed planar region bounded by one or more CCW loops of arcs and
// segments. Loops are simple and pairwise disjoint; holes are not
// representable.
struct ArcRegion {
    std::vector<Loop> loops;
};

struct Ball {
    Vec2 center{0, 0};
    double radius = 1.0;
    double area() const;
};

// --- construction helpers ---

ArcRegion make_disk(const Vec2& center, double radius);

// --- diagnostics ---

// Returns human-readable violations (open loop, self-intersection,
// non-positive loop area, bad edge fields); empty means valid.
std::vector<std::string> validate(const ArcRegion& region);

// --- measures ---

double area(const ArcRegion& region);
double perimeter(const ArcRegion& region);
Vec2 centroid(const ArcRegion& region);
Vec2 loop_centroid(const Loop& loop);
std::pair<Vec2, Vec2> bounding_box(const ArcRegion& region);

// --- point queries ---

bool contains(const ArcRegion& region, const Vec2& p);
double boundary_distance(const ArcRegion& region, const Vec2& p);

// --- circle interactions ---

// A transversal crossing of the region boundary with a circle;
// sign = +1 where the boundary enters the ball, -1 where it exits.
struct Crossing {
    Vec2 p{0, 0};
    double angle = 0.0;  // polar angle of p on the ball circle
    int sign = 0;
};

// All transversal crossings of the region boundary with the ball circle,
// ordered CCW by angle. Throws transversality_error on tangential or
// shared-arc contact; the count is even with alternating signs.
std::vector<Crossing> circle_boundary_intersections(const ArcRegion& region, const Ball& ball);

// Result of clipping a region against a disk. inside_arcs lists the CCW
// angle intervals (lo, hi) of the ball circle interior to the region,
// hi > lo, possibly wrapping past pi.
struct CircleClip {
    double inter_area = 0.0;  // |region ∩ ball|
    std::vector<std::pair<double, double>> inside_arcs;
    std::vector<std::pair<double, double>> on_arcs;  // circle arcs lying on the region boundary
    std::vector<Crossing> crossings;
    bool tangential = false;  // tangency or shared-arc contact was detected
    bool used_fallback = false;
};

// Exact arc-aware clipping: boundary edges are split at circle crossings,
// classified by side and integrated in closed form together with the ball
// arcs interior to the region. Falls back to dense polyline flattening for
// pathological assemblies.
CircleClip clip_with_ball(const ArcRegion& region, const Ball& ball);

// |region Δ ball| = |region| + |ball| - 2 |region ∩ ball|.
double symm_diff_area(const ArcRegion& region, const Ball& ball);

// --- rigid motions & scaling ---

ArcRegion rigid_transform(const ArcRegion& region, double rotation, const Vec2& translation);
ArcRegion scale_region(const ArcRegion& region, double factor);

}  // namespace qiso
