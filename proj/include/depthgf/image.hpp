#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depthgf/color.hpp"
#include "depthgf/error.hpp"

namespace depthgf {

/// Dense row-major 2-D array. Rows index m (height M), columns index n (width N).
template <class T>
class Plane {
public:
    Plane() = default;
    Plane(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool same_shape(const auto& other) const noexcept {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

using DepthPlane = Plane<double>;
using ColorPlane = Plane<Rgb8>;

/// Depth and chroma of one pixel, in the units the edge weights use.
struct PixelDatum {
    double d;
    double a;
    double b;
};

/// Aligned color + depth pair. The CIELAB chroma planes are always derived from
/// the retained RGB, so the color side is immutable once constructed; only the
/// depth plane is replaced as denoising proceeds.
class RgbdImage {
public:
    RgbdImage() = default;

    RgbdImage(ColorPlane rgb, DepthPlane depth) : rgb_(std::move(rgb)), depth_(std::move(depth)) {
        if (!rgb_.same_shape(depth_)) {
            throw AlignmentError("color is " + shape_string(rgb_) + " but depth is " +
                                 shape_string(depth_));
        }
        lab_a_ = DepthPlane(rgb_.rows(), rgb_.cols());
        lab_b_ = DepthPlane(rgb_.rows(), rgb_.cols());
        for (std::size_t i = 0; i < rgb_.size(); ++i) {
            const Rgb8 px = rgb_.values()[i];
            const Lab lab = rgb_to_lab(px.r, px.g, px.b);
            lab_a_.values()[i] = lab.a;
            lab_b_.values()[i] = lab.b;
        }
    }

    std::size_t rows() const noexcept { return depth_.rows(); }
    std::size_t cols() const noexcept { return depth_.cols(); }
    std::size_t pixel_count() const noexcept { return depth_.size(); }

    const DepthPlane& depth() const noexcept { return depth_; }
    const DepthPlane& lab_a() const noexcept { return lab_a_; }
    const DepthPlane& lab_b() const noexcept { return lab_b_; }
    const ColorPlane& rgb() const noexcept { return rgb_; }

    PixelDatum datum(std::size_t row, std::size_t col) const {
        return {depth_(row, col), lab_a_(row, col), lab_b_(row, col)};
    }

    void set_depth(DepthPlane depth) {
        if (!depth.same_shape(depth_)) {
            throw AlignmentError("replacement depth is " + shape_string(depth) + ", image is " +
                                 shape_string(depth_));
        }
        depth_ = std::move(depth);
    }

    RgbdImage with_depth(DepthPlane depth) const {
        RgbdImage copy = *this;
        copy.set_depth(std::move(depth));
        return copy;
    }

private:
    template <class P>
    static std::string shape_string(const P& p) {
        return std::to_string(p.rows()) + "x" + std::to_string(p.cols());
    }

    ColorPlane rgb_;
    DepthPlane depth_;
    DepthPlane lab_a_;
    DepthPlane lab_b_;
};

inline DepthPlane clamp_depth(DepthPlane plane, double lo = 0.0, double hi = 255.0) {
    for (double& v : plane.values()) v = std::clamp(v, lo, hi);
    return plane;
}

}  // namespace depthgf
