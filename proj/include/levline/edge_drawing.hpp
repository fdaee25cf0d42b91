#pragma once

#include <array>
#include <vector>

#include "levline/gradient_field.hpp"

namespace levline {

enum class ChainKind { Line, Loop };

/// Ordered 8-connected pixel chain. `kind` starts as Line; edge refinement
/// reclassifies closed chains as Loop.
struct EdgeChain {
    std::vector<PixelCoord> points;
    ChainKind kind = ChainKind::Line;
};

/// The three next-point candidates around quantized direction `dir`
/// (image coordinates, y down). The straight step comes first.
std::array<PixelCoord, 3> candidate_offsets(int dir);

/// Tracks edge chains from equalized anchors, walking along the level-line
/// in both directions. Each pixel is claimed by at most one chain; anchors
/// already covered by earlier chains are skipped. Chains with fewer than
/// two points are dropped.
std::vector<EdgeChain> draw_edges(const GradientField& field, const std::vector<Anchor>& anchors);

} // namespace levline
