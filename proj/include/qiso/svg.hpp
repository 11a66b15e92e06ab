#pragma once

#include <array>
#include <string>
#include <vector>

#include "qiso/geometry.hpp"

namespace qiso {

struct SvgAnnotations {
    std::vector<Ball> balls;                    // drawn dashed
    std::vector<Vec2> points;                   // intersection markers
    std::vector<std::array<Vec2, 2>> axes;      // dashed symmetry axes
};

// Deterministic SVG document: arcs as native path arc commands, byte
// identical across runs for identical input.
std::string render_svg(const ArcRegion& region, const SvgAnnotations& annotations = {});

}  // namespace qiso
