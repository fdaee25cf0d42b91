#pragma once

#include <cstdint>
#include <vector>

#include "levline/core.hpp"
#include "levline/image.hpp"

namespace levline {

/// Detector knobs. Defaults follow the reference configuration:
/// magnitude threshold 0.2, equalization radius 10 px, endpoint threshold 3 px,
/// inlier ratio 0.5, validation thresholds 3 px / 20 deg, angle weight 2,
/// minimum segment length 15 px.
struct DetectorParams {
    double grad_thresh = 0.2;      // T_g^m, on per-image-max normalized magnitude
    double equalize_radius = 10.0; // anchor spacing radius (px)
    double endpoint_thresh = 3.0;  // loop / merge endpoint distance (px)
    double inlier_ratio = 0.5;     // T_ir
    double dist_thresh = 3.0;      // T_v^d (px)
    double angle_thresh = 20.0;    // T_v^a (deg)
    double rho = 2.0;              // weight of the angle term in the fitting loss
    double min_length = 15.0;      // shortest emitted segment (px)
    int init_window = 9;           // points in the seed window
    int max_consecutive_rejects = 3;
    bool init_refine = true;       // refine the seed window before growing
    bool angle_validation = true;  // level-line angle check in validation
};

/// Enforces the parameter invariants (positive thresholds, inlier ratio in
/// (0,1], angle threshold below 90 deg); throws std::invalid_argument.
void validate_params(const DetectorParams& p);

/// Per-pixel level-line field. `level` is the unit vector perpendicular to the
/// gradient, expressed in image coordinates (x right, y down); `dir` is its
/// quantized 8-direction bin; `valid` marks pixels with normalized magnitude
/// at or above the threshold.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> mag;     // normalized to per-image max, in [0,1]
    std::vector<Vec2> level;     // (u,v); zero for pixels with zero gradient
    std::vector<std::uint8_t> dir;
    std::vector<std::uint8_t> valid;

    size_t idx(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Seed pixel for edge tracking: a local maximum of gradient magnitude
/// across the level-line.
struct Anchor {
    int x = 0;
    int y = 0;
    double mag = 0.0;
};

/// Quantizes a level-line vector into one of 8 compass bins, 45 deg wide,
/// bin 0 centered on East and counting counterclockwise in the y-up frame.
/// Boundary angles (odd multiples of 22.5 deg) go to the lower bin.
int quantize_direction(double u, double v);

/// Builds magnitude (normalized by the per-image maximum), level-line vectors,
/// quantized directions and the validity mask from raw Sobel responses.
GradientField build_gradient_field(const RawGradients& raw, double grad_thresh);

/// Anchors: valid pixels whose magnitude is >= both neighbors across the
/// level-line, strictly greater than at least one. The border frame is skipped.
std::vector<Anchor> extract_anchors(const GradientField& field);

/// Greedy spacing: anchors sorted by magnitude (ties by (y,x)) are kept only
/// when farther than `radius` from every anchor kept so far.
std::vector<Anchor> equalize_anchors(const std::vector<Anchor>& anchors, double radius);

/// Compass step offset for direction k (0 = East, counterclockwise), y down.
PixelCoord compass_offset(int dir);

} // namespace levline
