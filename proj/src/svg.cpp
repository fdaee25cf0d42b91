#include "levline/svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace levline {

namespace {

std::string base64(const std::vector<std::uint8_t>& data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
    }
    const size_t rest = data.size() - i;
    if (rest == 1) {
        const unsigned v = data[i] << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rest == 2) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

/// Mean level-line along the segment, sign-aligned to the first sample so
/// opposite-polarity samples do not cancel.
Vec2 tick_direction(const LineSegment& s, const GradientField* field) {
    const Vec2 dir{-(s.line.b), s.line.a};
    if (!field) return dir;

    Vec2 acc{};
    Vec2 first{};
    const int steps = std::max(2, static_cast<int>(s.length() / 2.0));
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const int x = static_cast<int>(std::lround(s.p1.x + t * (s.p2.x - s.p1.x)));
        const int y = static_cast<int>(std::lround(s.p1.y + t * (s.p2.y - s.p1.y)));
        if (!field->in_bounds(x, y)) continue;
        Vec2 lv = field->level[field->idx(x, y)];
        if (lv.x == 0.0 && lv.y == 0.0) continue;
        if (first.x == 0.0 && first.y == 0.0)
            first = lv;
        else if (dot(lv, first) < 0.0)
            lv = Vec2{-lv.x, -lv.y};
        acc = acc + lv;
    }
    const double n = norm(acc);
    return n > 0.0 ? Vec2{acc.x / n, acc.y / n} : dir;
}

} // namespace

std::string render_svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segments,
                               const GradientField* field) {
    std::ostringstream svg;
    svg.precision(10);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << img.width << "\" height=\""
        << img.height << "\" viewBox=\"0 0 " << img.width << " " << img.height << "\">\n";
    svg << "  <image width=\"" << img.width << "\" height=\"" << img.height
        << "\" href=\"data:image/png;base64," << base64(encode_png_gray(img))
        << "\" style=\"image-rendering:pixelated\"/>\n";

    for (const LineSegment& s : segments) {
        svg << "  <polyline points=\"" << s.p1.x << "," << s.p1.y << " " << s.p2.x << ","
            << s.p2.y << "\" fill=\"none\" stroke=\"#00c200\" stroke-width=\"1\"/>\n";
    }
    for (const LineSegment& s : segments) {
        const Vec2 mid{0.5 * (s.p1.x + s.p2.x), 0.5 * (s.p1.y + s.p2.y)};
        const Vec2 d = tick_direction(s, field);
        // Tick: a short arrow along the level-line at the midpoint.
        const double len = 6.0;
        const Vec2 tip{mid.x + len * d.x, mid.y + len * d.y};
        svg << "  <line x1=\"" << mid.x << "\" y1=\"" << mid.y << "\" x2=\"" << tip.x
            << "\" y2=\"" << tip.y << "\" stroke=\"#ff00ff\" stroke-width=\"0.8\"/>\n";
        svg << "  <circle cx=\"" << tip.x << "\" cy=\"" << tip.y
            << "\" r=\"1\" fill=\"#ff00ff\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void save_svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segments,
                      const GradientField* field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << render_svg_overlay(img, segments, field);
    if (!out) throw IoError(path + ": write failed");
}

} // namespace levline
