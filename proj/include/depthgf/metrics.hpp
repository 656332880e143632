#pragma once

#include <cmath>
#include <limits>

#include "depthgf/error.hpp"
#include "depthgf/image.hpp"

namespace depthgf {

inline double mean_squared_error(const DepthPlane& reference, const DepthPlane& test) {
    if (!reference.same_shape(test)) throw InputDomainError("PSNR operands differ in size");
    if (reference.empty()) throw InputDomainError("PSNR of empty planes");
    const auto ref = reference.values();
    const auto tst = test.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double e = ref[i] - tst[i];
        sum += e * e;
    }
    return sum / static_cast<double>(ref.size());
}

/// 10 log10(255^2 / MSE) over all pixels; +infinity for identical planes.
inline double psnr(const DepthPlane& reference, const DepthPlane& test) {
    const double mse = mean_squared_error(reference, test);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace depthgf
