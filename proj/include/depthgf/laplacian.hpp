#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "depthgf/error.hpp"
#include "depthgf/graph.hpp"

namespace depthgf {

/// Combinatorial Laplacian L = D - W in compressed sparse row form.
/// Each row stores its diagonal plus one entry per incident edge.
class SparseLaplacian {
public:
    explicit SparseLaplacian(const SimilarityGraph& graph) : n_(graph.num_vertices()) {
        std::vector<std::size_t> counts(n_, 1);
        for (const auto& e : graph.edges()) {
            ++counts[e.i];
            ++counts[e.j];
        }
        row_ptr_.resize(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] = row_ptr_[i] + counts[i];
        col_.resize(row_ptr_[n_]);
        val_.resize(row_ptr_[n_]);

        std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
        for (std::size_t i = 0; i < n_; ++i) {
            col_[fill[i]] = i;
            val_[fill[i]++] = 0.0;
        }
        for (const auto& e : graph.edges()) {
            col_[fill[e.i]] = e.j;
            val_[fill[e.i]++] = -e.weight;
            col_[fill[e.j]] = e.i;
            val_[fill[e.j]++] = -e.weight;
        }
        // Diagonal first, then neighbors in pixel raster order. Row sums then
        // accumulate in the same order under any vertex labeling, so relabeling
        // permutes the output bit for bit.
        const VertexLabeling& labeling = graph.labeling();
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t i = 0; i < n_; ++i) {
            row.clear();
            for (std::size_t k = row_ptr_[i] + 1; k < row_ptr_[i + 1]; ++k) row.emplace_back(col_[k], val_[k]);
            std::sort(row.begin(), row.end(),
                      [&](const auto& x, const auto& y) { return labeling.pixel(x.first) < labeling.pixel(y.first); });
            for (std::size_t k = 0; k < row.size(); ++k) {
                col_[row_ptr_[i] + 1 + k] = row[k].first;
                val_[row_ptr_[i] + 1 + k] = row[k].second;
            }
            double degree = 0.0;
            for (std::size_t k = row_ptr_[i] + 1; k < row_ptr_[i + 1]; ++k) degree -= val_[k];
            val_[row_ptr_[i]] = degree;
            max_degree_ = std::max(max_degree_, degree);
        }
    }

    std::size_t dimension() const noexcept { return n_; }
    std::size_t nonzeros() const noexcept { return val_.size(); }
    double max_degree() const noexcept { return max_degree_; }
    double degree(std::size_t i) const { return val_[row_ptr_[i]]; }

    std::span<const std::size_t> row_offsets() const noexcept { return row_ptr_; }
    std::span<const std::size_t> columns() const noexcept { return col_; }
    std::span<const double> values() const noexcept { return val_; }

    /// y = L x
    void multiply(std::span<const double> x, std::span<double> y) const {
        if (x.size() != n_ || y.size() != n_) throw InputDomainError("SpMV dimension mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
            y[i] = acc;
        }
    }

    std::vector<double> operator*(std::span<const double> x) const {
        std::vector<double> y(n_);
        multiply(x, y);
        return y;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_;
    std::vector<double> val_;
    double max_degree_ = 0.0;
};

inline SparseLaplacian laplacian(const SimilarityGraph& graph) { return SparseLaplacian(graph); }

}  // namespace depthgf
