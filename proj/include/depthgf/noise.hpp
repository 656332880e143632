#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "depthgf/error.hpp"
#include "depthgf/image.hpp"

namespace depthgf {

/// Reproducible standard normal samples: std::mt19937_64 (whose output sequence
/// is fixed by the C++ standard) feeding the Box-Muller transform, with uniforms
/// built from the top 53 bits. Unlike std::normal_distribution, the values are
/// identical on every conforming platform.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;          // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Adds i.i.d. N(0, sigma^2) noise in raster order, then clamps to [0, 255].
inline DepthPlane add_awgn(const DepthPlane& clean, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InputDomainError("noise sigma must be non-negative");
    DepthPlane noisy = clean;
    if (sigma == 0.0) return noisy;
    GaussianSource gauss(seed);
    for (double& v : noisy.values()) v = std::clamp(v + sigma * gauss(), 0.0, 255.0);
    return noisy;
}

}  // namespace depthgf
