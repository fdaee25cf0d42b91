#include "levline/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

namespace levline {

namespace {

// ---------------------------------------------------------------- netpbm ---

int pnm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') { // comment runs to end of line
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    return tok.empty() ? EOF : 0;
}

long pnm_int(std::istream& in, const std::string& what, const std::string& path) {
    std::string tok;
    if (pnm_next_token(in, tok) == EOF)
        throw FormatError(path + ": truncated header, missing " + what);
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FormatError(path + ": bad " + what + " '" + tok + "'");
    }
}

GrayImage load_pnm(std::ifstream& in, const std::string& path) {
    std::string magic;
    pnm_next_token(in, magic);
    const bool ascii = (magic == "P2" || magic == "P3");
    const bool color = (magic == "P3" || magic == "P6");
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
        throw FormatError(path + ": unsupported netpbm magic '" + magic + "'");

    long w = pnm_int(in, "width", path);
    long h = pnm_int(in, "height", path);
    long maxval = pnm_int(in, "maxval", path);
    if (w <= 0 || h <= 0) throw FormatError(path + ": non-positive dimensions");
    if (maxval <= 0 || maxval > 255)
        throw FormatError(path + ": only 8-bit netpbm supported (maxval " +
                          std::to_string(maxval) + ")");

    const size_t samples = static_cast<size_t>(w) * h * (color ? 3 : 1);
    std::vector<double> raw(samples);
    if (ascii) {
        for (size_t i = 0; i < samples; ++i)
            raw[i] = static_cast<double>(pnm_int(in, "sample", path));
    } else {
        std::vector<std::uint8_t> buf(samples);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(samples));
        if (static_cast<size_t>(in.gcount()) != samples)
            throw FormatError(path + ": truncated pixel data");
        for (size_t i = 0; i < samples; ++i) raw[i] = buf[i];
    }

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    if (color) {
        for (size_t i = 0; i < img.data.size(); ++i) {
            double r = raw[3 * i], g = raw[3 * i + 1], b = raw[3 * i + 2];
            img.data[i] = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
        }
    } else {
        for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = raw[i] / 255.0;
    }
    return img;
}

// ------------------------------------------------------------------- png ---

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};

GrayImage load_png(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError(path + ": cannot open file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<std::uint8_t> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": corrupt PNG stream");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": only 8-bit PNG supported (depth " +
                          std::to_string(bit_depth) + ")");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const size_t stride = png_get_rowbytes(png, info);
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": unsupported PNG layout");
    }

    pixels.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = pixels.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const std::uint8_t* row = pixels.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            double v;
            if (channels == 1) {
                v = row[x];
            } else {
                v = 0.299 * row[3 * x] + 0.587 * row[3 * x + 1] + 0.114 * row[3 * x + 2];
            }
            img.at(static_cast<int>(x), static_cast<int>(y)) = v / 255.0;
        }
    }
    return img;
}

bool has_png_signature(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::array<unsigned char, 8> sig{};
    in.read(reinterpret_cast<char*>(sig.data()), 8);
    static const std::array<unsigned char, 8> magic = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return in.gcount() == 8 && sig == magic;
}

} // namespace

GrayImage load_grayscale(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    char c0 = 0;
    in.get(c0);
    if (!in) throw FormatError(path + ": empty file");
    if (c0 == 'P') {
        in.unget();
        return load_pnm(in, path);
    }
    in.close();
    if (has_png_signature(path)) return load_png(path);
    throw FormatError(path + ": not a PNG/PGM/PPM file");
}

GrayImage gaussian_smooth(const GrayImage& img) {
    if (img.width < 5 || img.height < 5)
        throw std::invalid_argument("gaussian_smooth: image smaller than 5x5 kernel");

    // sigma = 1, sampled at integer offsets -2..2, normalized to unit sum.
    std::array<double, 5> k{};
    double sum = 0.0;
    for (int i = -2; i <= 2; ++i) {
        k[i + 2] = std::exp(-0.5 * i * i);
        sum += k[i + 2];
    }
    for (double& w : k) w /= sum;

    const int W = img.width, H = img.height;
    auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };

    GrayImage tmp(W, H), out(W, H);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double acc = 0.0;
            for (int i = -2; i <= 2; ++i) acc += k[i + 2] * img.at(clampi(x + i, 0, W - 1), y);
            tmp.at(x, y) = acc;
        }
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double acc = 0.0;
            for (int i = -2; i <= 2; ++i) acc += k[i + 2] * tmp.at(x, clampi(y + i, 0, H - 1));
            out.at(x, y) = acc;
        }
    return out;
}

RawGradients sobel(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("sobel: image smaller than 3x3 kernel");

    const int W = img.width, H = img.height;
    RawGradients g;
    g.width = W;
    g.height = H;
    g.gx.assign(static_cast<size_t>(W) * H, 0.0);
    g.gy.assign(static_cast<size_t>(W) * H, 0.0);

    for (int y = 1; y < H - 1; ++y) {
        for (int x = 1; x < W - 1; ++x) {
            const double tl = img.at(x - 1, y - 1), tc = img.at(x, y - 1), tr = img.at(x + 1, y - 1);
            const double ml = img.at(x - 1, y), mr = img.at(x + 1, y);
            const double bl = img.at(x - 1, y + 1), bc = img.at(x, y + 1), br = img.at(x + 1, y + 1);
            const size_t i = static_cast<size_t>(y) * W + x;
            g.gx[i] = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            g.gy[i] = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
        }
    }
    return g;
}

std::vector<std::uint8_t> encode_png_gray(const GrayImage& img) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("encode_png_gray: libpng init failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("encode_png_gray: libpng write failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
            buf->insert(buf->end(), data, data + len);
        },
        [](png_structp) {});

    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<size_t>(img.width));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double v = std::clamp(img.at(x, y), 0.0, 1.0);
            row[static_cast<size_t>(x)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (double v : img.data) {
        double c = std::clamp(v, 0.0, 1.0);
        out.put(static_cast<char>(std::lround(c * 255.0)));
    }
    if (!out) throw IoError(path + ": write failed");
}

} // namespace levline
