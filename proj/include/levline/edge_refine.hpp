#pragma once

#include <span>
#include <vector>

#include "levline/edge_drawing.hpp"

namespace levline {

/// Marks the chain Loop when its endpoints are within `endpoint_thresh`
/// pixels and it has at least 8 points, otherwise Line.
EdgeChain classify_chain(EdgeChain chain, double endpoint_thresh);

/// Joins Line chains whose endpoints are within `endpoint_thresh`, closest
/// pair first, until no pair qualifies. Merged chains are re-classified and
/// may become Loops. Loop chains never take part.
std::vector<EdgeChain> merge_line_chains(std::vector<EdgeChain> chains, double endpoint_thresh);

/// Chord-to-point distance accumulation corner scores, one per point.
/// Chord lengths 10/20/30 points; each accumulation is normalized to max 1
/// and the per-point scores multiplied. Loop chains wrap cyclically; Line
/// chains score 0 within a chord length of either end. Chains shorter than
/// 61 points get all-zero scores.
std::vector<double> cpda_corner_scores(const EdgeChain& chain);

/// Same accumulation on real-valued points (the integer chain is a special
/// case); exposed for geometry tests.
std::vector<double> cpda_corner_scores(std::span<const Vec2> pts, bool cyclic);

/// Rotates a Loop chain so the sharpest corner (highest score, ties to the
/// lowest original index) comes first. Throws on Line chains.
EdgeChain reorder_loop_chain(EdgeChain chain);

/// classify -> merge -> reorder, the full refinement pass.
std::vector<EdgeChain> refine_chains(std::vector<EdgeChain> chains, double endpoint_thresh);

} // namespace levline
