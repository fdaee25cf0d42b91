#pragma once

#include <array>
#include <utility>
#include <vector>

#include "levline/segment_fitting.hpp"

namespace levline {

/// Planar projective transform, row-major 3x3, stored with h[8] = 1 whenever
/// that entry is nonzero.
struct Homography {
    std::array<double, 9> h = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Homography identity() { return Homography{}; }
    double determinant() const;
    Homography inverse() const;
    Homography normalized() const;
    /// Maps a point; throws ProjectionError when it lands at infinity.
    Vec2 apply(Vec2 p) const;
};

class ProjectionError : public std::runtime_error {
public:
    explicit ProjectionError(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Matching thresholds; the two reference configurations are
/// strict (1.5 px, 5 deg, 75%) and loose (3 px, 10 deg, 75%).
struct EvalConfig {
    double dist_thresh = 1.5;   // T_e^d (px)
    double angle_thresh = 5.0;  // T_e^a (deg)
    double overlap_thresh = 0.75; // T_o

    static EvalConfig strict() { return EvalConfig{1.5, 5.0, 0.75}; }
    static EvalConfig loose() { return EvalConfig{3.0, 10.0, 0.75}; }
};

struct MatchReport {
    int n_r = 0;
    int n_t = 0;
    int n_m = 0;
    double rep = 0.0;
    std::vector<std::pair<int, int>> pairs; // (ref index, test index), one-to-one
};

/// Maps both endpoints through H and refits the implicit line from them.
LineSegment project_segment(const Homography& H, const LineSegment& seg);

struct PairMetrics {
    double distance = 0.0; // max endpoint distance of p to q's infinite line (px)
    double angle = 0.0;    // acute angle between directions (deg)
    double overlap = 0.0;  // projected intersection over the shorter length
};

PairMetrics segment_pair_metrics(const LineSegment& p, const LineSegment& q);

/// Symmetric, mutual-closest one-to-one matching between two detections
/// related by H (closeness = projected-midpoint distance).
MatchReport match_segments(const std::vector<LineSegment>& ref,
                           const std::vector<LineSegment>& test, const Homography& H,
                           const EvalConfig& cfg);

/// (n_m/2) * (1/n_r + 1/n_t); 0 when either detection set is empty.
double repeatability(int n_m, int n_r, int n_t);

/// Drops segments shorter than min_length (evaluation pre-filter).
std::vector<LineSegment> filter_min_length(const std::vector<LineSegment>& segs,
                                           double min_length);

} // namespace levline
