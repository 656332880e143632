#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace depthgf {

struct Lab {
    double lightness;
    double a;
    double b;
};

namespace detail {

inline double srgb_to_linear(std::uint8_t v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    constexpr double epsilon = 216.0 / 24389.0;
    constexpr double kappa = 24389.0 / 27.0;
    return t > epsilon ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

// sRGB (D65) linear RGB -> XYZ
constexpr std::array<std::array<double, 3>, 3> kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

// Reference white taken as the image of RGB (1,1,1) so that grays map to a* = b* = 0.
constexpr double kWhiteX = 0.4124564 + 0.3575761 + 0.1804375;
constexpr double kWhiteY = 0.2126729 + 0.7151522 + 0.0721750;
constexpr double kWhiteZ = 0.0193339 + 0.1191920 + 0.9503041;

}  // namespace detail

/// 8-bit sRGB to CIELAB (D65). Only a* and b* guide the similarity graph.
inline Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double lr = detail::srgb_to_linear(r);
    const double lg = detail::srgb_to_linear(g);
    const double lb = detail::srgb_to_linear(b);
    const auto& m = detail::kRgbToXyz;
    const double x = m[0][0] * lr + m[0][1] * lg + m[0][2] * lb;
    const double y = m[1][0] * lr + m[1][1] * lg + m[1][2] * lb;
    const double z = m[2][0] * lr + m[2][1] * lg + m[2][2] * lb;

    const double fx = detail::lab_f(x / detail::kWhiteX);
    const double fy = detail::lab_f(y / detail::kWhiteY);
    const double fz = detail::lab_f(z / detail::kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace depthgf
