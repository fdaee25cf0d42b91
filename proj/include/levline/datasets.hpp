#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levline/evaluation.hpp"

namespace levline {

/// One benchmark sequence: a reference image plus test images, each paired
/// with the homography mapping reference coordinates into it.
struct Sequence {
    struct TestEntry {
        std::filesystem::path image;
        Homography href_to_test;
        int index = 0; // 2..N
    };

    std::string name;
    std::filesystem::path ref_image;
    std::vector<TestEntry> tests;
    std::string transformation = "unknown"; // blur|view|zoom+rotation|light|JPEG|unknown
};

/// Reads 9 whitespace-separated reals (row-major), normalizes so h33 = 1,
/// and rejects singular matrices.
Homography parse_homography_file(const std::filesystem::path& path);

/// Parses a homography from text (the file format without the file).
Homography parse_homography_text(const std::string& text, const std::string& origin);

/// Full-precision, parse_homography round-trippable formatting.
std::string format_homography(const Homography& H);
void write_homography_file(const Homography& H, const std::filesystem::path& path);

/// Loads a sequence directory laid out either as img1..imgN + H1to2p ... or
/// 1..N + H_1_2 ...; the transformation label comes from transform.txt.
Sequence load_sequence(const std::filesystem::path& dir);

} // namespace levline
