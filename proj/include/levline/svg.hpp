#pragma once

#include <string>
#include <vector>

#include "levline/gradient_field.hpp"
#include "levline/image.hpp"
#include "levline/segment_fitting.hpp"

namespace levline {

/// SVG overlay: the source image (embedded as PNG), one line per segment and
/// a level-line tick at each segment midpoint. `field` may be null; ticks
/// then follow the fitted line direction.
std::string render_svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segments,
                               const GradientField* field);

void save_svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segments,
                      const GradientField* field, const std::string& path);

} // namespace levline
