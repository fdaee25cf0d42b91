#pragma once

#include <string>
#include <vector>

#include "levline/segment_fitting.hpp"

namespace levline {

/// Persisted result of one detection run; round-trips through JSON without
/// losing numeric precision.
struct DetectionRecord {
    std::string image;
    int width = 0;
    int height = 0;
    DetectorParams params;
    std::vector<LineSegment> segments;
};

std::string record_to_json(const DetectionRecord& rec);
DetectionRecord record_from_json(const std::string& json_text);

void save_record(const DetectionRecord& rec, const std::string& path);
DetectionRecord load_record(const std::string& path);

} // namespace levline
