#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levline/core.hpp"

namespace levline {

/// Grayscale raster, row-major, intensities in [0,1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Raw Sobel responses. gx positive when intensity grows to the right,
/// gy positive when it grows downward. The 1-pixel border frame is zero.
struct RawGradients {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;
};

/// Reads an 8-bit PNG, PGM (P2/P5) or PPM (P3/P6). Color is converted with
/// Rec.601 luma weights 0.299 R + 0.587 G + 0.114 B, then scaled by 1/255.
GrayImage load_grayscale(const std::string& path);

/// 5x5 separable Gaussian, sigma = 1, kernel normalized to unit sum.
/// Borders replicate the edge rows/columns.
GrayImage gaussian_smooth(const GrayImage& img);

/// Standard 3x3 Sobel. Requires at least 3x3.
RawGradients sobel(const GrayImage& img);

/// Encodes the image as an 8-bit grayscale PNG in memory.
std::vector<std::uint8_t> encode_png_gray(const GrayImage& img);

/// Writes a binary PGM (P5), mainly for fixtures and debugging.
void save_pgm(const GrayImage& img, const std::string& path);

} // namespace levline
