#include "levline/gradient_field.hpp"

#include <algorithm>
#include <cmath>

namespace levline {

void validate_params(const DetectorParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("DetectorParams: ") + name +
                                        " must be strictly positive");
    };
    positive(p.grad_thresh, "grad_thresh");
    positive(p.equalize_radius, "equalize_radius");
    positive(p.endpoint_thresh, "endpoint_thresh");
    positive(p.dist_thresh, "dist_thresh");
    positive(p.angle_thresh, "angle_thresh");
    positive(p.rho, "rho");
    positive(p.min_length, "min_length");
    if (!(p.inlier_ratio > 0.0 && p.inlier_ratio <= 1.0))
        throw std::invalid_argument("DetectorParams: inlier_ratio must be in (0,1]");
    if (!(p.angle_thresh < 90.0))
        throw std::invalid_argument("DetectorParams: angle_thresh must be below 90 degrees");
    if (p.init_window < 2)
        throw std::invalid_argument("DetectorParams: init_window must be at least 2");
    if (p.max_consecutive_rejects < 1)
        throw std::invalid_argument("DetectorParams: max_consecutive_rejects must be at least 1");
}

int quantize_direction(double u, double v) {
    if (u == 0.0 && v == 0.0)
        throw std::domain_error("quantize_direction: zero vector");
    // Angle in the y-up frame; (u,v) is stored y-down.
    double deg = rad_to_deg(std::atan2(-v, u));
    if (deg < 0.0) deg += 360.0;
    // Bins are (k*45 - 22.5, k*45 + 22.5]; the shared boundary belongs to the lower k.
    int k = static_cast<int>(std::ceil((deg - 22.5) / 45.0));
    return ((k % 8) + 8) % 8;
}

PixelCoord compass_offset(int dir) {
    static constexpr PixelCoord steps[8] = {
        {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}};
    if (dir < 0 || dir > 7) throw std::domain_error("compass_offset: direction out of range");
    return steps[dir];
}

GradientField build_gradient_field(const RawGradients& raw, double grad_thresh) {
    GradientField f;
    f.width = raw.width;
    f.height = raw.height;
    const size_t n = static_cast<size_t>(raw.width) * raw.height;
    f.mag.assign(n, 0.0);
    f.level.assign(n, Vec2{});
    f.dir.assign(n, 0);
    f.valid.assign(n, 0);

    double max_mag = 0.0;
    for (size_t i = 0; i < n; ++i) {
        f.mag[i] = std::hypot(raw.gx[i], raw.gy[i]);
        max_mag = std::max(max_mag, f.mag[i]);
    }
    if (max_mag == 0.0) return f; // degenerate: everything stays invalid

    for (size_t i = 0; i < n; ++i) {
        const double m = f.mag[i];
        f.mag[i] = m / max_mag;
        if (m > 0.0) {
            // (u,v) = (cos(theta_o + pi/2), -sin(theta_o + pi/2)) with
            // theta_o = atan2(-gy, gx); closed form (gy, -gx)/|g|.
            f.level[i] = Vec2{raw.gy[i] / m, -raw.gx[i] / m};
            f.dir[i] = static_cast<std::uint8_t>(quantize_direction(f.level[i].x, f.level[i].y));
        }
        f.valid[i] = (f.mag[i] >= grad_thresh) ? 1 : 0;
    }
    return f;
}

std::vector<Anchor> extract_anchors(const GradientField& field) {
    std::vector<Anchor> anchors;
    for (int y = 1; y < field.height - 1; ++y) {
        for (int x = 1; x < field.width - 1; ++x) {
            const size_t i = field.idx(x, y);
            if (!field.valid[i]) continue;
            // Neighbors across the level-line: compass step perpendicular to dir.
            const PixelCoord step = compass_offset((field.dir[i] + 2) % 8);
            const double m = field.mag[i];
            const double m1 = field.mag[field.idx(x + step.x, y + step.y)];
            const double m2 = field.mag[field.idx(x - step.x, y - step.y)];
            if (m >= m1 && m >= m2 && (m > m1 || m > m2))
                anchors.push_back(Anchor{x, y, m});
        }
    }
    return anchors;
}

std::vector<Anchor> equalize_anchors(const std::vector<Anchor>& anchors, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("equalize_anchors: radius must be positive");
    if (anchors.empty()) return {};

    std::vector<Anchor> sorted = anchors;
    std::sort(sorted.begin(), sorted.end(), [](const Anchor& a, const Anchor& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    // Bucket kept anchors on a grid of cell size `radius` so each candidate
    // only checks the 3x3 cell neighborhood.
    int min_x = sorted.front().x, max_x = sorted.front().x;
    int min_y = sorted.front().y, max_y = sorted.front().y;
    for (const Anchor& a : sorted) {
        min_x = std::min(min_x, a.x);
        max_x = std::max(max_x, a.x);
        min_y = std::min(min_y, a.y);
        max_y = std::max(max_y, a.y);
    }
    const int cells_x = static_cast<int>((max_x - min_x) / radius) + 1;
    const int cells_y = static_cast<int>((max_y - min_y) / radius) + 1;
    std::vector<std::vector<Anchor>> grid(static_cast<size_t>(cells_x) * cells_y);
    auto cell_x = [&](const Anchor& a) { return static_cast<int>((a.x - min_x) / radius); };
    auto cell_y = [&](const Anchor& a) { return static_cast<int>((a.y - min_y) / radius); };

    const double r2 = radius * radius;
    std::vector<Anchor> kept;
    for (const Anchor& a : sorted) {
        const int cx = cell_x(a), cy = cell_y(a);
        bool blocked = false;
        for (int dy = -1; dy <= 1 && !blocked; ++dy)
            for (int dx = -1; dx <= 1 && !blocked; ++dx) {
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= cells_x || ny < 0 || ny >= cells_y) continue;
                for (const Anchor& q : grid[static_cast<size_t>(ny) * cells_x + nx]) {
                    const double ddx = a.x - q.x, ddy = a.y - q.y;
                    if (ddx * ddx + ddy * ddy <= r2) { // must strictly exceed radius
                        blocked = true;
                        break;
                    }
                }
            }
        if (!blocked) {
            kept.push_back(a);
            grid[static_cast<size_t>(cy) * cells_x + cx].push_back(a);
        }
    }
    return kept;
}

} // namespace levline
