#include "levline/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levline/image.hpp"

namespace levline {

namespace fs = std::filesystem;

Homography parse_homography_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
        double v = 0.0;
        const auto* begin = tok.data();
        const auto* end = tok.data() + tok.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end)
            throw ParseError(origin + ": non-numeric token '" + tok + "'");
        vals.push_back(v);
    }
    if (vals.size() != 9)
        throw ParseError(origin + ": expected 9 values, got " + std::to_string(vals.size()));

    Homography H;
    std::copy(vals.begin(), vals.end(), H.h.begin());
    H = H.normalized();
    if (std::abs(H.determinant()) < 1e-12)
        throw ParseError(origin + ": homography is singular");
    return H;
}

Homography parse_homography_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_homography_text(buf.str(), path.string());
}

std::string format_homography(const Homography& H) {
    std::ostringstream out;
    out.precision(17);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out << H.h[static_cast<size_t>(3 * r + c)];
            out << (c == 2 ? '\n' : ' ');
        }
    }
    return out.str();
}

void write_homography_file(const Homography& H, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << format_homography(H);
    if (!out) throw IoError(path.string() + ": write failed");
}

namespace {

const char* kImageExts[] = {".ppm", ".pgm", ".png", ".PPM", ".PGM", ".PNG"};

fs::path find_image(const fs::path& dir, const std::string& stem) {
    for (const char* ext : kImageExts) {
        fs::path p = dir / (stem + ext);
        if (fs::exists(p)) return p;
    }
    return {};
}

fs::path find_homography(const fs::path& dir, int index) {
    // Oxford convention first, then the underscore convention.
    fs::path a = dir / ("H1to" + std::to_string(index) + "p");
    if (fs::exists(a)) return a;
    fs::path b = dir / ("H_1_" + std::to_string(index));
    if (fs::exists(b)) return b;
    return {};
}

std::string read_transform_label(const fs::path& dir) {
    std::ifstream in(dir / "transform.txt");
    if (!in) return "unknown";
    std::string label;
    in >> label;
    return label.empty() ? std::string("unknown") : label;
}

} // namespace

Sequence load_sequence(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError(dir.string() + ": not a directory");

    Sequence seq;
    seq.name = dir.filename().string();
    seq.transformation = read_transform_label(dir);

    std::string prefix = "img";
    seq.ref_image = find_image(dir, "img1");
    if (seq.ref_image.empty()) {
        seq.ref_image = find_image(dir, "1");
        prefix.clear();
    }
    if (seq.ref_image.empty())
        throw ParseError(dir.string() + ": no reference image (img1.* or 1.*)");
    load_grayscale(seq.ref_image.string()); // must decode

    for (int i = 2;; ++i) {
        const fs::path img = find_image(dir, prefix + std::to_string(i));
        if (img.empty()) break;
        const fs::path hpath = find_homography(dir, i);
        if (hpath.empty())
            throw ParseError(dir.string() + ": missing homography H1to" + std::to_string(i) +
                             "p / H_1_" + std::to_string(i) + " for " +
                             img.filename().string());
        load_grayscale(img.string()); // must decode
        seq.tests.push_back(Sequence::TestEntry{img, parse_homography_file(hpath), i});
    }
    if (seq.tests.empty())
        throw ParseError(dir.string() + ": no test images found");
    return seq;
}

} // namespace levline
