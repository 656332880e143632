#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depthgf/error.hpp"
#include "depthgf/image.hpp"

namespace depthgf {

/// Kernel widths and depth cut-off of the color-guided edge weight.
struct WeightParams {
    double delta_th = 100.0;
    double sigma_d = 40.0;
    double sigma_a = 10.0;
    double sigma_b = 10.0;

    void validate() const {
        if (!(delta_th > 0.0) || !(sigma_d > 0.0) || !(sigma_a > 0.0) || !(sigma_b > 0.0)) {
            throw InputDomainError("weight parameters must all be strictly positive");
        }
    }

    friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

struct GridDims {
    std::size_t rows = 0;  // M
    std::size_t cols = 0;  // N

    std::size_t size() const noexcept { return rows * cols; }
    friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// 1-based column-major vertex label i = (n - 1) * M + m.
inline std::size_t vertex_index(std::size_t row, std::size_t col, GridDims dims) {
    if (row < 1 || row > dims.rows || col < 1 || col > dims.cols) {
        throw InputDomainError("pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                               ") outside " + std::to_string(dims.rows) + "x" +
                               std::to_string(dims.cols) + " grid");
    }
    return (col - 1) * dims.rows + row;
}

/// Bijection between pixels and 0-based vertex ids. The default is the
/// column-major order of vertex_index(); any permutation is accepted, and
/// filtering results do not depend on the choice.
class VertexLabeling {
public:
    static VertexLabeling column_major(GridDims dims) {
        std::vector<std::size_t> ids(dims.size());
        for (std::size_t r = 0; r < dims.rows; ++r)
            for (std::size_t c = 0; c < dims.cols; ++c)
                ids[r * dims.cols + c] = c * dims.rows + r;
        return VertexLabeling(dims, std::move(ids));
    }

    /// `vertex_of_pixel[r * cols + c]` is the vertex id of pixel (r, c).
    static VertexLabeling from_permutation(GridDims dims, std::vector<std::size_t> vertex_of_pixel) {
        if (vertex_of_pixel.size() != dims.size())
            throw InputDomainError("labeling size does not match the pixel grid");
        std::vector<bool> seen(dims.size(), false);
        for (std::size_t v : vertex_of_pixel) {
            if (v >= dims.size() || seen[v]) throw InputDomainError("labeling is not a permutation");
            seen[v] = true;
        }
        return VertexLabeling(dims, std::move(vertex_of_pixel));
    }

    GridDims dims() const noexcept { return dims_; }
    std::size_t vertex(std::size_t row, std::size_t col) const { return vertex_of_pixel_[row * dims_.cols + col]; }
    std::size_t pixel(std::size_t vertex) const { return pixel_of_vertex_[vertex]; }

private:
    VertexLabeling(GridDims dims, std::vector<std::size_t> ids)
        : dims_(dims), vertex_of_pixel_(std::move(ids)), pixel_of_vertex_(vertex_of_pixel_.size()) {
        for (std::size_t p = 0; p < vertex_of_pixel_.size(); ++p) pixel_of_vertex_[vertex_of_pixel_[p]] = p;
    }

    GridDims dims_;
    std::vector<std::size_t> vertex_of_pixel_;
    std::vector<std::size_t> pixel_of_vertex_;
};

inline double gaussian_kernel(double x, double sigma) { return std::exp(-(x * x) / (2.0 * sigma * sigma)); }

/// Product of depth/chroma Gaussian kernels, forced to exactly zero once the
/// depth gap reaches the cut-off.
inline double edge_weight(const PixelDatum& p, const PixelDatum& q, const WeightParams& params) {
    const double dd = std::abs(p.d - q.d);
    if (!(dd < params.delta_th)) return 0.0;
    const double da = std::abs(p.a - q.a);
    const double db = std::abs(p.b - q.b);
    return gaussian_kernel(dd, params.sigma_d) * gaussian_kernel(da, params.sigma_a) *
           gaussian_kernel(db, params.sigma_b);
}

struct WeightedEdge {
    std::size_t i;  // smaller vertex id
    std::size_t j;
    double weight;
};

/// Sparse 4-neighbor similarity graph. Immutable after construction.
class SimilarityGraph {
public:
    SimilarityGraph(VertexLabeling labeling, std::vector<WeightedEdge> edges)
        : labeling_(std::move(labeling)), edges_(std::move(edges)) {
        std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
            return x.i != y.i ? x.i < y.i : x.j < y.j;
        });
    }

    std::size_t num_vertices() const noexcept { return labeling_.dims().size(); }
    GridDims dims() const noexcept { return labeling_.dims(); }
    const VertexLabeling& labeling() const noexcept { return labeling_; }
    std::span<const WeightedEdge> edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Weight of (i, j); zero when the edge is absent. Symmetric by construction.
    double weight(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{i, j},
                                   [](const WeightedEdge& e, const std::pair<std::size_t, std::size_t>& key) {
                                       return e.i != key.first ? e.i < key.first : e.j < key.second;
                                   });
        return (it != edges_.end() && it->i == i && it->j == j) ? it->weight : 0.0;
    }

    std::vector<double> degrees() const {
        std::vector<double> deg(num_vertices(), 0.0);
        for (const auto& e : edges_) {
            deg[e.i] += e.weight;
            deg[e.j] += e.weight;
        }
        return deg;
    }

private:
    VertexLabeling labeling_;
    std::vector<WeightedEdge> edges_;
};

inline SimilarityGraph build_similarity_graph(const RgbdImage& image, const WeightParams& params,
                                              const VertexLabeling& labeling) {
    params.validate();
    const std::size_t rows = image.rows();
    const std::size_t cols = image.cols();
    if (rows == 0 || cols == 0 || (rows < 2 && cols < 2)) throw InputDomainError("image must have at least two pixels along one axis");
    if (labeling.dims() != GridDims{rows, cols}) throw InputDomainError("labeling does not match image size");

    std::vector<WeightedEdge> edges;
    edges.reserve(rows * (cols - 1) + (rows - 1) * cols);
    auto connect = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
        const double w = edge_weight(image.datum(r0, c0), image.datum(r1, c1), params);
        if (w == 0.0) return;
        const std::size_t u = labeling.vertex(r0, c0);
        const std::size_t v = labeling.vertex(r1, c1);
        edges.push_back({std::min(u, v), std::max(u, v), w});
    };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) connect(r, c, r, c + 1);
            if (r + 1 < rows) connect(r, c, r + 1, c);
        }
    }
    return SimilarityGraph(labeling, std::move(edges));
}

inline SimilarityGraph build_similarity_graph(const RgbdImage& image, const WeightParams& params) {
    return build_similarity_graph(image, params, VertexLabeling::column_major({image.rows(), image.cols()}));
}

/// Depth plane as a graph signal, f[vertex(m, n)] = d(m, n).
inline std::vector<double> extract_depth_signal(const DepthPlane& depth, const VertexLabeling& labeling) {
    if (labeling.dims() != GridDims{depth.rows(), depth.cols()})
        throw InputDomainError("labeling does not match depth plane");
    std::vector<double> f(depth.size());
    for (std::size_t r = 0; r < depth.rows(); ++r)
        for (std::size_t c = 0; c < depth.cols(); ++c) f[labeling.vertex(r, c)] = depth(r, c);
    return f;
}

inline std::vector<double> extract_depth_signal(const RgbdImage& image) {
    return extract_depth_signal(image.depth(), VertexLabeling::column_major({image.rows(), image.cols()}));
}

/// Exact inverse of extract_depth_signal().
inline DepthPlane signal_to_depth(std::span<const double> f, const VertexLabeling& labeling) {
    const GridDims dims = labeling.dims();
    if (f.size() != dims.size()) throw InputDomainError("signal length does not match the pixel grid");
    DepthPlane depth(dims.rows, dims.cols);
    for (std::size_t r = 0; r < dims.rows; ++r)
        for (std::size_t c = 0; c < dims.cols; ++c) depth(r, c) = f[labeling.vertex(r, c)];
    return depth;
}

/// Per-pixel mean weight over the pixel's grid neighbors (absent edges count as 0),
/// for visualizing how the graph segments the image.
inline DepthPlane mean_incident_weight(const SimilarityGraph& graph) {
    const GridDims dims = graph.dims();
    std::vector<double> sum(graph.num_vertices(), 0.0);
    for (const auto& e : graph.edges()) {
        sum[e.i] += e.weight;
        sum[e.j] += e.weight;
    }
    DepthPlane out(dims.rows, dims.cols);
    for (std::size_t r = 0; r < dims.rows; ++r) {
        for (std::size_t c = 0; c < dims.cols; ++c) {
            const std::size_t neighbors = (r > 0) + (r + 1 < dims.rows) + (c > 0) + (c + 1 < dims.cols);
            const double s = sum[graph.labeling().vertex(r, c)];
            out(r, c) = neighbors ? s / static_cast<double>(neighbors) : 0.0;
        }
    }
    return out;
}

}  // namespace depthgf
