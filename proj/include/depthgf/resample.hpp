#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "depthgf/error.hpp"
#include "depthgf/image.hpp"

namespace depthgf {

inline DepthPlane downsample(const DepthPlane& plane, std::size_t factor) {
    if (factor < 1) throw InputDomainError("downsample factor must be positive");
    if (factor > plane.rows() || factor > plane.cols()) throw InputDomainError("downsample factor exceeds image size");
    const std::size_t rows = plane.rows() / factor;
    const std::size_t cols = plane.cols() / factor;
    DepthPlane out(rows, cols);
    const double area = static_cast<double>(factor * factor);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double sum = 0.0;
            for (std::size_t dr = 0; dr < factor; ++dr)
                for (std::size_t dc = 0; dc < factor; ++dc) sum += plane(r * factor + dr, c * factor + dc);
            out(r, c) = sum / area;
        }
    return out;
}

inline ColorPlane downsample(const ColorPlane& plane, std::size_t factor) {
    if (factor < 1) throw InputDomainError("downsample factor must be positive");
    if (factor > plane.rows() || factor > plane.cols()) throw InputDomainError("downsample factor exceeds image size");
    const std::size_t rows = plane.rows() / factor;
    const std::size_t cols = plane.cols() / factor;
    ColorPlane out(rows, cols);
    const double area = static_cast<double>(factor * factor);
    auto mean = [&](std::size_t r, std::size_t c, std::uint8_t Rgb8::*channel) {
        double sum = 0.0;
        for (std::size_t dr = 0; dr < factor; ++dr)
            for (std::size_t dc = 0; dc < factor; ++dc) sum += plane(r * factor + dr, c * factor + dc).*channel;
        return static_cast<std::uint8_t>(std::lround(sum / area));
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out(r, c) = {mean(r, c, &Rgb8::r), mean(r, c, &Rgb8::g), mean(r, c, &Rgb8::b)};
    return out;
}

/// Block-mean downsampling; trailing rows/columns that do not fill a block are
/// dropped. Color is averaged in RGB and the chroma planes re-derived from it.
inline RgbdImage downsample(const RgbdImage& image, std::size_t factor) {
    if (factor < 2) throw InputDomainError("downsample factor must be at least 2");
    return RgbdImage(downsample(image.rgb(), factor), downsample(image.depth(), factor));
}

}  // namespace depthgf
