#include "levline/edge_drawing.hpp"

#include <algorithm>

namespace levline {

std::array<PixelCoord, 3> candidate_offsets(int dir) {
    // Offsets within 45 degrees of each direction's center, straight step first.
    static constexpr std::array<std::array<PixelCoord, 3>, 8> table = {{
        {{{1, 0}, {1, -1}, {1, 1}}},    // E
        {{{1, -1}, {1, 0}, {0, -1}}},   // NE
        {{{0, -1}, {1, -1}, {-1, -1}}}, // N
        {{{-1, -1}, {0, -1}, {-1, 0}}}, // NW
        {{{-1, 0}, {-1, -1}, {-1, 1}}}, // W
        {{{-1, 1}, {-1, 0}, {0, 1}}},   // SW
        {{{0, 1}, {-1, 1}, {1, 1}}},    // S
        {{{1, 1}, {0, 1}, {1, 0}}},     // SE
    }};
    if (dir < 0 || dir > 7) throw std::domain_error("candidate_offsets: direction out of range");
    return table[static_cast<size_t>(dir)];
}

namespace {

/// One directional walk from `start`, first travel vector `t0`. `start` is
/// already visited; newly claimed pixels are appended to `out`.
void walk(const GradientField& field, std::vector<std::uint8_t>& visited, PixelCoord start,
          Vec2 t0, std::vector<PixelCoord>& out) {
    PixelCoord cur = start;
    Vec2 prev_step = t0;
    for (;;) {
        Vec2 t = field.level[field.idx(cur.x, cur.y)];
        if (t.x == 0.0 && t.y == 0.0) break; // no orientation to follow
        if (dot(t, prev_step) < 0.0) t = Vec2{-t.x, -t.y};

        const auto cands = candidate_offsets(quantize_direction(t.x, t.y));
        bool found = false;
        PixelCoord best{};
        double best_mag = -1.0;
        for (const PixelCoord& off : cands) {
            const PixelCoord p{cur.x + off.x, cur.y + off.y};
            if (!field.in_bounds(p.x, p.y)) continue;
            const size_t i = field.idx(p.x, p.y);
            if (!field.valid[i]) continue;
            if (field.mag[i] > best_mag) { // ties keep the earlier candidate
                best_mag = field.mag[i];
                best = p;
                found = true;
            }
        }
        if (!found) break;
        if (visited[field.idx(best.x, best.y)]) break; // ran into a drawn edge

        visited[field.idx(best.x, best.y)] = 1;
        out.push_back(best);
        prev_step = Vec2{static_cast<double>(best.x - cur.x), static_cast<double>(best.y - cur.y)};
        cur = best;
    }
}

} // namespace

std::vector<EdgeChain> draw_edges(const GradientField& field, const std::vector<Anchor>& anchors) {
    std::vector<Anchor> order = anchors;
    std::sort(order.begin(), order.end(), [](const Anchor& a, const Anchor& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    std::vector<std::uint8_t> visited(static_cast<size_t>(field.width) * field.height, 0);
    std::vector<EdgeChain> chains;

    for (const Anchor& a : order) {
        const size_t ai = field.idx(a.x, a.y);
        if (visited[ai]) continue;
        visited[ai] = 1;

        const Vec2 lv = field.level[ai];
        std::vector<PixelCoord> forward, backward;
        walk(field, visited, PixelCoord{a.x, a.y}, lv, forward);
        walk(field, visited, PixelCoord{a.x, a.y}, Vec2{-lv.x, -lv.y}, backward);

        if (forward.size() + backward.size() < 1) {
            // Isolated anchor: single-point chain, discarded (stays visited).
            continue;
        }
        EdgeChain chain;
        chain.points.reserve(forward.size() + backward.size() + 1);
        chain.points.insert(chain.points.end(), backward.rbegin(), backward.rend());
        chain.points.push_back(PixelCoord{a.x, a.y});
        chain.points.insert(chain.points.end(), forward.begin(), forward.end());
        chains.push_back(std::move(chain));
    }
    return chains;
}

} // namespace levline
