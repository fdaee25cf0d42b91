#include "levline/segment_fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace levline {

namespace {

LineParams canonical(LineParams l) {
    const double n = std::hypot(l.a, l.b);
    l.a /= n;
    l.b /= n;
    l.c /= n;
    if (l.a < 0.0 || (l.a == 0.0 && l.b < 0.0)) {
        l.a = -l.a;
        l.b = -l.b;
        l.c = -l.c;
    }
    if (l.a == 0.0) l.a = 0.0; // normalize -0.0
    if (l.b == 0.0) l.b = 0.0;
    return l;
}

bool passes(const LineParams& line, Vec2 p, Vec2 lv, const DetectorParams& params) {
    if (point_line_distance(line, p.x, p.y) >= params.dist_thresh) return false;
    if (!params.angle_validation) return true;
    return level_line_angle_error(line, lv.x, lv.y) < params.angle_thresh;
}

} // namespace

LineParams fit_line_tls(std::span<const Vec2> points) {
    if (points.size() < 2)
        throw std::invalid_argument("fit_line_tls: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (const Vec2& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    bool distinct = false;
    for (const Vec2& p : points) {
        const double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        if (p.x != points[0].x || p.y != points[0].y) distinct = true;
    }
    if (!distinct)
        throw std::invalid_argument("fit_line_tls: all points identical");

    // Normal = eigenvector of the scatter matrix for the smaller eigenvalue.
    const double tr = sxx + syy;
    const double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
    const double lmin = 0.5 * (tr - disc);

    Vec2 n1{sxy, lmin - sxx};
    Vec2 n2{lmin - syy, sxy};
    Vec2 nrm = (norm(n1) >= norm(n2)) ? n1 : n2;
    if (norm(nrm) == 0.0) nrm = Vec2{1.0, 0.0}; // isotropic scatter, any direction fits

    LineParams l{nrm.x, nrm.y, 0.0};
    const double len = std::hypot(l.a, l.b);
    l.a /= len;
    l.b /= len;
    l.c = -(l.a * mx + l.b * my);
    return canonical(l);
}

double point_line_distance(const LineParams& line, double x, double y) {
    return std::abs(line.a * x + line.b * y + line.c) / std::hypot(line.a, line.b);
}

double level_line_angle_error(const LineParams& line, double u, double v) {
    if (u == 0.0 && v == 0.0)
        throw std::domain_error("level_line_angle_error: zero level-line vector");
    const double num = std::abs(-line.b * u + line.a * v);
    const double den = std::hypot(line.a, line.b) * std::hypot(u, v);
    const double cosang = std::clamp(num / den, 0.0, 1.0);
    return rad_to_deg(std::acos(cosang));
}

double clamped_loss(std::span<const Vec2> points, std::span<const Vec2> levels,
                    const LineParams& line, const DetectorParams& params) {
    if (points.size() != levels.size())
        throw std::invalid_argument("clamped_loss: points/levels length mismatch");
    double loss = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        const double d = point_line_distance(line, points[i].x, points[i].y);
        const double a = level_line_angle_error(line, levels[i].x, levels[i].y);
        loss += std::min(d / params.dist_thresh, 1.0) +
                params.rho * std::min(a / params.angle_thresh, 1.0);
    }
    return loss;
}

LineParams refine_line(std::span<const Vec2> points, std::span<const Vec2> levels,
                       const LineParams& init, const DetectorParams& params) {
    if (points.size() != levels.size())
        throw std::invalid_argument("refine_line: points/levels length mismatch");
    if (points.size() < 2) return init;

    auto loss_at = [&](double phi, double c) {
        const LineParams l{std::cos(phi), std::sin(phi), c};
        return clamped_loss(points, levels, l, params);
    };

    using Vertex = std::array<double, 2>; // (phi, c)
    const double phi0 = std::atan2(init.b, init.a);
    const double c0 = init.c / std::hypot(init.a, init.b);

    std::array<Vertex, 3> v = {Vertex{phi0, c0},
                               Vertex{phi0 + deg_to_rad(2.0), c0},
                               Vertex{phi0, c0 + 1.0}};
    std::array<double, 3> f{};
    for (int i = 0; i < 3; ++i) f[static_cast<size_t>(i)] = loss_at(v[static_cast<size_t>(i)][0], v[static_cast<size_t>(i)][1]);

    auto order = [&] {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[static_cast<size_t>(a)] < f[static_cast<size_t>(b)]; });
        std::array<Vertex, 3> vv{v[static_cast<size_t>(idx[0])], v[static_cast<size_t>(idx[1])], v[static_cast<size_t>(idx[2])]};
        std::array<double, 3> ff{f[static_cast<size_t>(idx[0])], f[static_cast<size_t>(idx[1])], f[static_cast<size_t>(idx[2])]};
        v = vv;
        f = ff;
    };

    constexpr double kAlpha = 1.0, kGamma = 2.0, kBeta = 0.5, kDelta = 0.5;
    constexpr double kSpreadTol = 1e-8;
    constexpr int kMaxIter = 200;

    order();
    for (int iter = 0; iter < kMaxIter && f[2] - f[0] >= kSpreadTol; ++iter) {
        const Vertex centroid{0.5 * (v[0][0] + v[1][0]), 0.5 * (v[0][1] + v[1][1])};
        auto combine = [&](double t) {
            return Vertex{centroid[0] + t * (centroid[0] - v[2][0]),
                          centroid[1] + t * (centroid[1] - v[2][1])};
        };

        const Vertex xr = combine(kAlpha);
        const double fr = loss_at(xr[0], xr[1]);
        if (fr < f[0]) {
            const Vertex xe = combine(kGamma);
            const double fe = loss_at(xe[0], xe[1]);
            if (fe < fr) {
                v[2] = xe;
                f[2] = fe;
            } else {
                v[2] = xr;
                f[2] = fr;
            }
        } else if (fr < f[1]) {
            v[2] = xr;
            f[2] = fr;
        } else {
            const bool outside = fr < f[2];
            const Vertex xc = combine(outside ? kBeta : -kBeta);
            const double fc = loss_at(xc[0], xc[1]);
            if (fc < std::min(fr, f[2])) {
                v[2] = xc;
                f[2] = fc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    v[static_cast<size_t>(i)][0] = v[0][0] + kDelta * (v[static_cast<size_t>(i)][0] - v[0][0]);
                    v[static_cast<size_t>(i)][1] = v[0][1] + kDelta * (v[static_cast<size_t>(i)][1] - v[0][1]);
                    f[static_cast<size_t>(i)] = loss_at(v[static_cast<size_t>(i)][0], v[static_cast<size_t>(i)][1]);
                }
            }
        }
        order();
    }

    const LineParams refined = canonical(LineParams{std::cos(v[0][0]), std::sin(v[0][0]), v[0][1]});
    const double init_loss = clamped_loss(points, levels, init, params);
    return (f[0] < init_loss) ? refined : canonical(init);
}

Vec2 project_onto_line(const LineParams& line, Vec2 p) {
    const double n2 = line.a * line.a + line.b * line.b;
    const double t = (line.a * p.x + line.b * p.y + line.c) / n2;
    return Vec2{p.x - line.a * t, p.y - line.b * t};
}

std::vector<SegmentTrace> extract_segments_traced(const EdgeChain& chain,
                                                  const GradientField& field,
                                                  const DetectorParams& params) {
    std::vector<SegmentTrace> out;
    const size_t n = chain.points.size();
    const size_t window = static_cast<size_t>(std::max(params.init_window, 2));
    if (n < window) return out;

    std::vector<Vec2> pts(n), lvs(n);
    for (size_t i = 0; i < n; ++i) {
        const PixelCoord& p = chain.points[i];
        pts[i] = Vec2{static_cast<double>(p.x), static_cast<double>(p.y)};
        lvs[i] = field.level[field.idx(p.x, p.y)];
    }

    size_t start = 0;
    while (start + window <= n) {
        // (1) seed fit on the window
        LineParams line;
        try {
            line = fit_line_tls(std::span<const Vec2>(pts).subspan(start, window));
        } catch (const std::invalid_argument&) {
            ++start;
            continue;
        }

        // (2) dual validation of the window
        size_t window_inliers = 0;
        for (size_t i = start; i < start + window; ++i)
            if (passes(line, pts[i], lvs[i], params)) ++window_inliers;
        if (static_cast<double>(window_inliers) < params.inlier_ratio * static_cast<double>(window)) {
            ++start;
            continue;
        }

        // (3) optional seed refinement, then collect the accepted set
        if (params.init_refine)
            line = refine_line(std::span<const Vec2>(pts).subspan(start, window),
                               std::span<const Vec2>(lvs).subspan(start, window), line, params);

        std::vector<Vec2> accepted, accepted_levels;
        size_t last_accepted = start;
        for (size_t i = start; i < start + window; ++i)
            if (passes(line, pts[i], lvs[i], params)) {
                accepted.push_back(pts[i]);
                accepted_levels.push_back(lvs[i]);
                last_accepted = i;
            }
        if (accepted.size() < 2) {
            ++start;
            continue;
        }

        // grow point by point, re-fitting after each acceptance
        int rejects = 0;
        for (size_t i = start + window; i < n && rejects < params.max_consecutive_rejects; ++i) {
            if (passes(line, pts[i], lvs[i], params)) {
                accepted.push_back(pts[i]);
                accepted_levels.push_back(lvs[i]);
                last_accepted = i;
                rejects = 0;
                line = fit_line_tls(accepted);
            } else {
                ++rejects;
            }
        }

        const size_t span_end = last_accepted + 1; // exclusive
        const size_t span_len = span_end - start;

        // (4) final refinement over accepted points and their level-lines
        line = refine_line(accepted, accepted_levels, line, params);

        // (5) endpoints from the first/last inliers of the final line,
        // (6) emit when long enough and still dense enough
        size_t support = 0;
        double dist_sum = 0.0, angle_sum = 0.0;
        size_t first_in = span_end, last_in = span_end;
        for (size_t i = start; i < span_end; ++i) {
            if (!passes(line, pts[i], lvs[i], params)) continue;
            ++support;
            dist_sum += point_line_distance(line, pts[i].x, pts[i].y);
            angle_sum += level_line_angle_error(line, lvs[i].x, lvs[i].y);
            if (first_in == span_end) first_in = i;
            last_in = i;
        }

        if (support >= 2 &&
            static_cast<double>(support) >= params.inlier_ratio * static_cast<double>(span_len)) {
            LineSegment seg;
            seg.line = line;
            seg.p1 = project_onto_line(line, pts[first_in]);
            seg.p2 = project_onto_line(line, pts[last_in]);
            seg.support = static_cast<int>(support);
            seg.mean_dist = dist_sum / static_cast<double>(support);
            seg.mean_angle = angle_sum / static_cast<double>(support);
            if (seg.length() >= params.min_length)
                out.push_back(SegmentTrace{seg, start, span_end});
        }

        // (7) resume after the last accepted point
        start = span_end;
    }
    return out;
}

std::vector<LineSegment> extract_segments(const EdgeChain& chain, const GradientField& field,
                                          const DetectorParams& params) {
    std::vector<LineSegment> segs;
    for (SegmentTrace& t : extract_segments_traced(chain, field, params))
        segs.push_back(t.segment);
    return segs;
}

} // namespace levline
