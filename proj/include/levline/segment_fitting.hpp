#pragma once

#include <span>
#include <vector>

#include "levline/edge_refine.hpp"
#include "levline/gradient_field.hpp"

namespace levline {

/// Implicit line a*x + b*y + c = 0 with a^2 + b^2 = 1.
/// Canonical sign: a > 0, or a == 0 and b > 0.
struct LineParams {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
};

struct LineSegment {
    LineParams line;
    Vec2 p1;
    Vec2 p2;
    int support = 0;        // inlier edge points
    double mean_dist = 0.0; // mean inlier distance to the line (px)
    double mean_angle = 0.0; // mean inlier level-line angle error (deg)

    double length() const { return norm(p2 - p1); }
};

/// Orthogonal (total) least squares through >= 2 distinct points.
LineParams fit_line_tls(std::span<const Vec2> points);

/// |a*x + b*y + c| / sqrt(a^2 + b^2).
double point_line_distance(const LineParams& line, double x, double y);

/// Angle between the line direction and the level-line (u,v), in degrees,
/// in [0, 90]; invariant to flipping (u,v).
double level_line_angle_error(const LineParams& line, double u, double v);

/// Sum over points of min(dist/T_d, 1) + rho * min(angle/T_a, 1).
double clamped_loss(std::span<const Vec2> points, std::span<const Vec2> levels,
                    const LineParams& line, const DetectorParams& params);

/// Minimizes clamped_loss over (phi, c) with a Nelder-Mead simplex started
/// at `init` (steps 2 deg / 1 px, spread tolerance 1e-8, 200 iterations max).
/// Never returns a line with higher loss than `init`.
LineParams refine_line(std::span<const Vec2> points, std::span<const Vec2> levels,
                       const LineParams& init, const DetectorParams& params);

/// Orthogonal projection of p onto the line.
Vec2 project_onto_line(const LineParams& line, Vec2 p);

/// Per-segment extraction bookkeeping, used by invariant checks: the chain
/// span [span_begin, span_end) the segment consumed.
struct SegmentTrace {
    LineSegment segment;
    size_t span_begin = 0;
    size_t span_end = 0;
};

/// Progressive sliding-window extraction over a refined chain: seed window
/// fit, dual coordinate/level-line validation, point-by-point growth with
/// TLS re-fits, final loss refinement and endpoint projection.
std::vector<SegmentTrace> extract_segments_traced(const EdgeChain& chain,
                                                  const GradientField& field,
                                                  const DetectorParams& params);

std::vector<LineSegment> extract_segments(const EdgeChain& chain, const GradientField& field,
                                          const DetectorParams& params);

} // namespace levline
