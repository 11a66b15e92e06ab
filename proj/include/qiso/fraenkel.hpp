#pragma once

#include <vector>

#include "qiso/geometry.hpp"

namespace qiso {

struct SearchConfig {
    int max_descents = 24;           // best starts kept for local descent
    double grid_pitch_factor = 0.25; // grid pitch as a fraction of the ball radius
    double value_tol_factor = 1e-7;  // near-tie window, relative to |region|
    double dedup_tol = 1e-5;         // spatial dedup of minimizers
    double grad_tol = 1e-6;          // first-order stationarity target
    int max_iter = 400;
    double lambda_floor = 1e-6;      // below this the region counts as a ball
    unsigned threads = 0;            // 0 = hardware concurrency
};

struct AsymmetryResult {
    double lambda = 0.0;
    std::vector<Vec2> optimal_centers;  // every near-tied local minimizer, deterministic order
    double psi_at_optimum = 0.0;
};

struct FunctionalResult {
    double delta = 0.0;
    double lambda = 0.0;
    double value = 0.0;  // delta / lambda^2
};

// Radius of the area-matched comparison ball, sqrt(|region|/pi).
double matched_radius(const ArcRegion& region);

// |region Δ B(center)| with the area-matched ball.
double psi(const ArcRegion& region, const Vec2& center);

// Analytic gradient of psi in the ball center: each arc of the ball circle
// interior to the region contributes the (negated, doubled) difference of
// its endpoint coordinates relative to the center. Matches central finite
// differences wherever the configuration is transversal; otherwise throws
// transversality_error.
Vec2 psi_gradient(const ArcRegion& region, const Vec2& center);

// Global minimization of psi over ball centers: deterministic multistart
// (centroid, loop centroids, grid over the inflated bounding box) followed
// by backtracking gradient descent.
AsymmetryResult optimal_balls(const ArcRegion& region, const SearchConfig& config = {});

// Isoperimetric deficit (P - 2 sqrt(pi |region|)) / (2 sqrt(pi |region|)),
// clipped to zero within numeric noise.
double deficit(const ArcRegion& region);

// delta / lambda^2; throws near_ball_error when lambda is below the floor.
FunctionalResult functional(const ArcRegion& region, const SearchConfig& config = {});

}  // namespace qiso
