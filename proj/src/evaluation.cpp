#include "levline/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace levline {

double Homography::determinant() const {
    return h[0] * (h[4] * h[8] - h[5] * h[7]) - h[1] * (h[3] * h[8] - h[5] * h[6]) +
           h[2] * (h[3] * h[7] - h[4] * h[6]);
}

Homography Homography::normalized() const {
    Homography out = *this;
    if (out.h[8] != 0.0) {
        for (double& v : out.h) v /= h[8];
        out.h[8] = 1.0; // kill any residual rounding
    }
    return out;
}

Homography Homography::inverse() const {
    const double det = determinant();
    if (std::abs(det) < 1e-12)
        throw SingularMatrixError("homography is singular");
    Homography inv;
    inv.h = {(h[4] * h[8] - h[5] * h[7]) / det, (h[2] * h[7] - h[1] * h[8]) / det,
             (h[1] * h[5] - h[2] * h[4]) / det, (h[5] * h[6] - h[3] * h[8]) / det,
             (h[0] * h[8] - h[2] * h[6]) / det, (h[2] * h[3] - h[0] * h[5]) / det,
             (h[3] * h[7] - h[4] * h[6]) / det, (h[1] * h[6] - h[0] * h[7]) / det,
             (h[0] * h[4] - h[1] * h[3]) / det};
    return inv.normalized();
}

Vec2 Homography::apply(Vec2 p) const {
    const double w = h[6] * p.x + h[7] * p.y + h[8];
    if (std::abs(w) <= 1e-9)
        throw ProjectionError("point maps to the plane at infinity");
    return Vec2{(h[0] * p.x + h[1] * p.y + h[2]) / w, (h[3] * p.x + h[4] * p.y + h[5]) / w};
}

namespace {

LineParams line_through(Vec2 p, Vec2 q) {
    // Normal perpendicular to the direction, canonical sign.
    const Vec2 d = q - p;
    const double len = norm(d);
    LineParams l{-d.y / len, d.x / len, 0.0};
    l.c = -(l.a * p.x + l.b * p.y);
    if (l.a < 0.0 || (l.a == 0.0 && l.b < 0.0)) {
        l.a = -l.a;
        l.b = -l.b;
        l.c = -l.c;
    }
    return l;
}

Vec2 midpoint(const LineSegment& s) { return Vec2{0.5 * (s.p1.x + s.p2.x), 0.5 * (s.p1.y + s.p2.y)}; }

} // namespace

LineSegment project_segment(const Homography& H, const LineSegment& seg) {
    LineSegment out = seg;
    out.p1 = H.apply(seg.p1);
    out.p2 = H.apply(seg.p2);
    if (norm(out.p2 - out.p1) == 0.0)
        throw ProjectionError("segment collapses under the homography");
    out.line = line_through(out.p1, out.p2);
    return out;
}

PairMetrics segment_pair_metrics(const LineSegment& p, const LineSegment& q) {
    const double lp = p.length(), lq = q.length();
    if (lp == 0.0 || lq == 0.0)
        throw std::invalid_argument("segment_pair_metrics: zero-length segment");

    const LineParams ql = line_through(q.p1, q.p2);
    PairMetrics m;
    m.distance = std::max(point_line_distance(ql, p.p1.x, p.p1.y),
                          point_line_distance(ql, p.p2.x, p.p2.y));

    const Vec2 dp = p.p2 - p.p1, dq = q.p2 - q.p1;
    const double cosang = std::clamp(std::abs(dot(dp, dq)) / (lp * lq), 0.0, 1.0);
    m.angle = rad_to_deg(std::acos(cosang));

    // Overlap of p's orthogonal projection onto q's line with q itself.
    const Vec2 dir{dq.x / lq, dq.y / lq};
    const double t1 = dot(p.p1 - q.p1, dir);
    const double t2 = dot(p.p2 - q.p1, dir);
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    const double inter = std::min(hi, lq) - std::max(lo, 0.0);
    m.overlap = std::clamp(inter / std::min(lp, lq), 0.0, 1.0);
    return m;
}

namespace {

bool passes_thresholds(const PairMetrics& m, const EvalConfig& cfg) {
    return m.distance <= cfg.dist_thresh && m.angle <= cfg.angle_thresh &&
           m.overlap >= cfg.overlap_thresh;
}

} // namespace

MatchReport match_segments(const std::vector<LineSegment>& ref,
                           const std::vector<LineSegment>& test, const Homography& H,
                           const EvalConfig& cfg) {
    if (!(cfg.dist_thresh > 0.0) || !(cfg.angle_thresh > 0.0) ||
        !(cfg.overlap_thresh > 0.0 && cfg.overlap_thresh <= 1.0))
        throw std::invalid_argument("EvalConfig: thresholds out of range");
    if (std::abs(H.determinant()) < 1e-12)
        throw SingularMatrixError("match_segments: singular homography");
    const Homography Hinv = H.inverse();

    MatchReport report;
    report.n_r = static_cast<int>(ref.size());
    report.n_t = static_cast<int>(test.size());

    // Projected segments; entries that land at infinity are excluded.
    std::vector<std::optional<LineSegment>> ref_p(ref.size()), test_p(test.size());
    for (size_t i = 0; i < ref.size(); ++i) {
        try {
            ref_p[i] = project_segment(H, ref[i]);
        } catch (const ProjectionError&) {
        }
    }
    for (size_t j = 0; j < test.size(); ++j) {
        try {
            test_p[j] = project_segment(Hinv, test[j]);
        } catch (const ProjectionError&) {
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> closeness(ref.size() * test.size(), inf);
    auto slot = [&](size_t i, size_t j) -> double& { return closeness[i * test.size() + j]; };

    for (size_t i = 0; i < ref.size(); ++i) {
        if (!ref_p[i]) continue;
        for (size_t j = 0; j < test.size(); ++j) {
            if (!test_p[j]) continue;
            if (!passes_thresholds(segment_pair_metrics(*ref_p[i], test[j]), cfg)) continue;
            if (!passes_thresholds(segment_pair_metrics(*test_p[j], ref[i]), cfg)) continue;
            slot(i, j) = norm(midpoint(*ref_p[i]) - midpoint(test[j]));
        }
    }

    // Mutual closest, ties to the lowest index.
    std::vector<size_t> best_t(ref.size(), test.size());
    std::vector<size_t> best_r(test.size(), ref.size());
    for (size_t i = 0; i < ref.size(); ++i) {
        double best = inf;
        for (size_t j = 0; j < test.size(); ++j)
            if (slot(i, j) < best) {
                best = slot(i, j);
                best_t[i] = j;
            }
    }
    for (size_t j = 0; j < test.size(); ++j) {
        double best = inf;
        for (size_t i = 0; i < ref.size(); ++i)
            if (slot(i, j) < best) {
                best = slot(i, j);
                best_r[j] = i;
            }
    }
    for (size_t i = 0; i < ref.size(); ++i) {
        const size_t j = best_t[i];
        if (j < test.size() && best_r[j] == i)
            report.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }

    report.n_m = static_cast<int>(report.pairs.size());
    report.rep = repeatability(report.n_m, report.n_r, report.n_t);
    return report;
}

double repeatability(int n_m, int n_r, int n_t) {
    if (n_r <= 0 || n_t <= 0) return 0.0;
    // Same as (n_m/2)(1/n_r + 1/n_t), but exact when n_m == n_r == n_t.
    return (static_cast<double>(n_m) * (static_cast<double>(n_r) + static_cast<double>(n_t))) /
           (2.0 * static_cast<double>(n_r) * static_cast<double>(n_t));
}

std::vector<LineSegment> filter_min_length(const std::vector<LineSegment>& segs,
                                           double min_length) {
    std::vector<LineSegment> out;
    for (const LineSegment& s : segs)
        if (s.length() >= min_length) out.push_back(s);
    return out;
}

} // namespace levline
