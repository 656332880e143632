#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <png.h>

#include "depthgf/error.hpp"
#include "depthgf/image.hpp"

namespace depthgf {

/// 8-bit raster as read from disk: 1 (gray) or 3 (RGB) interleaved channels.
struct RawImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;
};

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool is_png(const std::vector<std::uint8_t>& bytes) {
    static constexpr std::array<std::uint8_t, 8> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= sig.size() && std::equal(sig.begin(), sig.end(), bytes.begin());
}

inline RawImage decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    std::size_t pos = 2;
    auto next_token = [&]() -> long {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw FormatError("malformed PNM header in " + name);
        long value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos++] - '0');
            if (value > (1L << 30)) throw FormatError("PNM header value too large in " + name);
        }
        return value;
    };
    const int channels = bytes[1] == '5' ? 1 : 3;
    const long cols = next_token();
    const long rows = next_token();
    const long maxval = next_token();
    if (maxval != 255) throw FormatError(name + ": only 8-bit PNM (maxval 255) is supported, got " + std::to_string(maxval));
    if (rows <= 0 || cols <= 0) throw FormatError(name + ": empty image");
    ++pos;  // single whitespace before raster
    const std::size_t expected = static_cast<std::size_t>(rows * cols * channels);
    if (bytes.size() < pos + expected) throw FormatError(name + ": truncated raster");
    RawImage img{static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), channels, {}};
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + expected));
    return img;
}

inline RawImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
        throw FormatError(name + ": " + png.message);
    if (png.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&png);
        throw FormatError(name + ": only 8-bit PNG is supported");
    }
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    RawImage img{png.height, png.width, color ? 3 : 1, {}};
    img.pixels.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
        const std::string msg = png.message;
        png_image_free(&png);
        throw FormatError(name + ": " + msg);
    }
    return img;
}

inline bool has_extension(const std::filesystem::path& path, const char* ext) {
    std::string e = path.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return e == ext;
}

}  // namespace detail

/// Reads 8-bit PNG, PGM (P5) or PPM (P6), detected from the file contents.
inline RawImage read_image(const std::filesystem::path& path) {
    const auto bytes = detail::read_file_bytes(path);
    const std::string name = path.string();
    if (detail::is_png(bytes)) return detail::decode_png(bytes, name);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
        return detail::decode_pnm(bytes, name);
    throw FormatError(name + ": not a PNG or binary PGM/PPM file");
}

/// Writes PNG when the extension is .png, otherwise binary PGM/PPM.
inline void write_image(const std::filesystem::path& path, const RawImage& img) {
    if (detail::has_extension(path, ".png")) {
        png_image png{};
        png.version = PNG_IMAGE_VERSION;
        png.width = static_cast<png_uint_32>(img.cols);
        png.height = static_cast<png_uint_32>(img.rows);
        png.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
        if (!png_image_write_to_file(&png, path.string().c_str(), 0, img.pixels.data(), 0, nullptr))
            throw FileError("cannot write " + path.string() + ": " + png.message);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open " + path.string() + " for writing");
    out << (img.channels == 3 ? "P6" : "P5") << '\n' << img.cols << ' ' << img.rows << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw FileError("short write to " + path.string());
}

inline std::uint8_t quantize_depth(double v) {
    return static_cast<std::uint8_t>(std::round(std::clamp(v, 0.0, 255.0)));
}

inline DepthPlane load_depth(const std::filesystem::path& path) {
    const RawImage raw = read_image(path);
    if (raw.channels != 1) throw FormatError(path.string() + ": depth must be single-channel");
    DepthPlane depth(raw.rows, raw.cols);
    std::copy(raw.pixels.begin(), raw.pixels.end(), depth.values().begin());
    return depth;
}

inline ColorPlane load_color(const std::filesystem::path& path) {
    const RawImage raw = read_image(path);
    if (raw.channels != 3) throw FormatError(path.string() + ": color image must be RGB");
    ColorPlane color(raw.rows, raw.cols);
    for (std::size_t i = 0; i < color.size(); ++i)
        color.values()[i] = {raw.pixels[3 * i], raw.pixels[3 * i + 1], raw.pixels[3 * i + 2]};
    return color;
}

/// Clamps to [0, 255] and rounds half away from zero.
inline void save_depth(const std::filesystem::path& path, const DepthPlane& depth) {
    RawImage raw{depth.rows(), depth.cols(), 1, std::vector<std::uint8_t>(depth.size())};
    std::transform(depth.values().begin(), depth.values().end(), raw.pixels.begin(), quantize_depth);
    write_image(path, raw);
}

inline void save_color(const std::filesystem::path& path, const ColorPlane& color) {
    RawImage raw{color.rows(), color.cols(), 3, std::vector<std::uint8_t>(3 * color.size())};
    for (std::size_t i = 0; i < color.size(); ++i) {
        const Rgb8 px = color.values()[i];
        raw.pixels[3 * i] = px.r;
        raw.pixels[3 * i + 1] = px.g;
        raw.pixels[3 * i + 2] = px.b;
    }
    write_image(path, raw);
}

inline RgbdImage load_rgbd(const std::filesystem::path& color_path, const std::filesystem::path& depth_path) {
    return RgbdImage(load_color(color_path), load_depth(depth_path));
}

/// Grayscale view of per-pixel mean incident weight, weight 1 -> 255.
inline void save_weight_map(const std::filesystem::path& path, const DepthPlane& weights) {
    DepthPlane scaled = weights;
    for (double& v : scaled.values()) v *= 255.0;
    save_depth(path, scaled);
}

}  // namespace depthgf
