#pragma once

#include <vector>

#include "levline/edge_refine.hpp"
#include "levline/image.hpp"
#include "levline/segment_fitting.hpp"

namespace levline {

/// Everything the pipeline produces; chains and the field are kept for
/// rendering and diagnostics.
struct DetectionResult {
    GradientField field;
    std::vector<EdgeChain> chains;
    std::vector<LineSegment> segments;
};

/// smooth -> gradients -> level-line field -> anchors -> drawing ->
/// refinement -> segment extraction.
DetectionResult detect_segments(const GrayImage& img, const DetectorParams& params);

} // namespace levline
