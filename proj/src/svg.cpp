#include "qiso/svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qiso {

namespace {
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string path_for_loop(const Loop& loop) {
    std::ostringstream d;
    const Vec2 p0 = loop.front().first();
    d << "M " << fmt(p0.x()) << " " << fmt(-p0.y());
    for (const auto& e : loop) {
        if (e.kind == Edge::Kind::segment) {
            d << " L " << fmt(e.b.x()) << " " << fmt(-e.b.y());
        } else {
            // split so every piece subtends at most a quarter turn
            const int n = std::max(1, static_cast<int>(std::ceil(std::abs(e.sweep) / (kPi / 2))));
            const int sweep_flag = e.sweep > 0.0 ? 0 : 1;  // math CCW is screen CCW after the y flip
            for (int i = 1; i <= n; ++i) {
                const Vec2 q = e.point_at(static_cast<double>(i) / n);
                d << " A " << fmt(e.radius) << " " << fmt(e.radius) << " 0 0 " << sweep_flag << " "
                  << fmt(q.x()) << " " << fmt(-q.y());
            }
        }
    }
    d << " Z";
    return d.str();
}
}  // namespace

std::string render_svg(const ArcRegion& region, const SvgAnnotations& ann) {
    auto [lo, hi] = bounding_box(region);
    for (const auto& b : ann.balls) {
        lo = lo.cwiseMin(b.center - Vec2(b.radius, b.radius));
        hi = hi.cwiseMax(b.center + Vec2(b.radius, b.radius));
    }
    const Vec2 span = hi - lo;
    const double pad = 0.08 * std::max(span.x(), span.y());
    const double w = span.x() + 2 * pad, h = span.y() + 2 * pad;
    const double stroke = 0.006 * std::max(w, h);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(lo.x() - pad) << " "
        << fmt(-hi.y() - pad) << " " << fmt(w) << " " << fmt(h) << "\" width=\"640\" height=\""
        << fmt(640.0 * h / w) << "\">\n";

    for (const auto& loop : region.loops)
        svg << "  <path d=\"" << path_for_loop(loop) << "\" fill=\"#dbe7f5\" stroke=\"#1f4e96\" stroke-width=\""
            << fmt(stroke) << "\"/>\n";

    for (const auto& b : ann.balls)
        svg << "  <circle cx=\"" << fmt(b.center.x()) << "\" cy=\"" << fmt(-b.center.y()) << "\" r=\""
            << fmt(b.radius) << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"" << fmt(stroke)
            << "\" stroke-dasharray=\"" << fmt(4 * stroke) << " " << fmt(3 * stroke) << "\"/>\n";

    for (const auto& axis : ann.axes)
        svg << "  <line x1=\"" << fmt(axis[0].x()) << "\" y1=\"" << fmt(-axis[0].y()) << "\" x2=\""
            << fmt(axis[1].x()) << "\" y2=\"" << fmt(-axis[1].y())
            << "\" stroke=\"#888888\" stroke-width=\"" << fmt(0.6 * stroke) << "\" stroke-dasharray=\""
            << fmt(2 * stroke) << " " << fmt(2 * stroke) << "\"/>\n";

    for (const auto& p : ann.points)
        svg << "  <circle cx=\"" << fmt(p.x()) << "\" cy=\"" << fmt(-p.y()) << "\" r=\"" << fmt(2.2 * stroke)
            << "\" fill=\"#c22f2f\"/>\n";

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace qiso
