#include "levline/edge_refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levline {

namespace {

double endpoint_distance(const PixelCoord& a, const PixelCoord& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

constexpr int kChordLengths[3] = {10, 20, 30};
constexpr int kMaxChord = 30;

double point_to_chord_distance(Vec2 p, Vec2 e0, Vec2 e1) {
    const Vec2 d = e1 - e0;
    const double len = norm(d);
    if (len == 0.0) return norm(p - e0);
    return std::abs(d.x * (p.y - e0.y) - d.y * (p.x - e0.x)) / len;
}

} // namespace

EdgeChain classify_chain(EdgeChain chain, double endpoint_thresh) {
    if (chain.points.size() < 2)
        throw std::invalid_argument("classify_chain: chain shorter than 2 points");
    const bool closed =
        endpoint_distance(chain.points.front(), chain.points.back()) <= endpoint_thresh;
    chain.kind = (closed && chain.points.size() >= 8) ? ChainKind::Loop : ChainKind::Line;
    return chain;
}

std::vector<EdgeChain> merge_line_chains(std::vector<EdgeChain> chains, double endpoint_thresh) {
    struct Pair {
        double d;
        size_t i, j;
        int ei, ej; // 0 = front, 1 = back
    };

    for (;;) {
        Pair best{std::numeric_limits<double>::infinity(), 0, 0, 0, 0};
        for (size_t i = 0; i < chains.size(); ++i) {
            if (chains[i].kind != ChainKind::Line) continue;
            for (size_t j = i + 1; j < chains.size(); ++j) {
                if (chains[j].kind != ChainKind::Line) continue;
                for (int ei = 0; ei < 2; ++ei)
                    for (int ej = 0; ej < 2; ++ej) {
                        const PixelCoord& a = ei ? chains[i].points.back() : chains[i].points.front();
                        const PixelCoord& b = ej ? chains[j].points.back() : chains[j].points.front();
                        const double d = endpoint_distance(a, b);
                        if (d <= endpoint_thresh && d < best.d) best = Pair{d, i, j, ei, ej};
                    }
            }
        }
        if (!std::isfinite(best.d)) break;

        // Orient so the matched endpoints sit adjacent in the joined chain.
        std::vector<PixelCoord>& a = chains[best.i].points;
        std::vector<PixelCoord> b = std::move(chains[best.j].points);
        if (best.ei == 0) std::reverse(a.begin(), a.end()); // matched end of A to the back
        if (best.ej == 1) std::reverse(b.begin(), b.end()); // matched end of B to the front
        a.insert(a.end(), b.begin(), b.end());
        chains[best.i] = classify_chain(std::move(chains[best.i]), endpoint_thresh);
        chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(best.j));
    }
    return chains;
}

std::vector<double> cpda_corner_scores(std::span<const Vec2> pts, bool cyclic) {
    const int n = static_cast<int>(pts.size());
    std::vector<double> score(pts.size(), 0.0);
    if (n < 2 * kMaxChord + 1) return score;

    std::vector<double> product(pts.size(), 1.0);
    std::vector<double> h(pts.size());
    for (int L : kChordLengths) {
        std::fill(h.begin(), h.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            if (!cyclic && (i < L || i >= n - L)) continue; // ends score 0 for this L
            double acc = 0.0;
            // Chords of L consecutive points with point i strictly inside.
            for (int j = i - L + 2; j <= i - 1; ++j) {
                const int j0 = cyclic ? ((j % n) + n) % n : j;
                const int j1 = cyclic ? (((j + L - 1) % n) + n) % n : j + L - 1;
                acc += point_to_chord_distance(pts[static_cast<size_t>(i)],
                                               pts[static_cast<size_t>(j0)],
                                               pts[static_cast<size_t>(j1)]);
            }
            h[static_cast<size_t>(i)] = acc;
        }
        const double hmax = *std::max_element(h.begin(), h.end());
        if (hmax > 0.0)
            for (size_t i = 0; i < h.size(); ++i) product[i] *= h[i] / hmax;
        else
            std::fill(product.begin(), product.end(), 0.0);
    }
    return product;
}

std::vector<double> cpda_corner_scores(const EdgeChain& chain) {
    std::vector<Vec2> pts;
    pts.reserve(chain.points.size());
    for (const PixelCoord& p : chain.points)
        pts.push_back(Vec2{static_cast<double>(p.x), static_cast<double>(p.y)});
    return cpda_corner_scores(pts, chain.kind == ChainKind::Loop);
}

EdgeChain reorder_loop_chain(EdgeChain chain) {
    if (chain.kind != ChainKind::Loop)
        throw std::logic_error("reorder_loop_chain: chain is not a Loop");

    const std::vector<double> scores = cpda_corner_scores(chain);
    const size_t start = static_cast<size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
    std::rotate(chain.points.begin(),
                chain.points.begin() + static_cast<std::ptrdiff_t>(start), chain.points.end());
    return chain;
}

std::vector<EdgeChain> refine_chains(std::vector<EdgeChain> chains, double endpoint_thresh) {
    for (EdgeChain& c : chains) c = classify_chain(std::move(c), endpoint_thresh);
    chains = merge_line_chains(std::move(chains), endpoint_thresh);
    for (EdgeChain& c : chains)
        if (c.kind == ChainKind::Loop) c = reorder_loop_chain(std::move(c));
    return chains;
}

} // namespace levline
