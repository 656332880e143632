#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "depthgf/error.hpp"
#include "depthgf/laplacian.hpp"

namespace depthgf {

/// Limits for the dense O(n^3) reference path.
struct OracleOptions {
    std::size_t max_vertices = 20000;
};

/// Eigenpairs of a Laplacian, eigenvalues ascending, column k of `eigenvectors`
/// paired with `eigenvalues[k]`. A partial decomposition holds only the lowest
/// `eigenvalues.size()` pairs of a `dimension`-vertex graph.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::size_t dimension = 0;

    std::size_t pair_count() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    bool complete() const noexcept { return pair_count() == dimension; }
};

inline Eigen::MatrixXd to_dense(const SparseLaplacian& lap) {
    const auto n = static_cast<Eigen::Index>(lap.dimension());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    const auto rows = lap.row_offsets();
    const auto cols = lap.columns();
    const auto vals = lap.values();
    for (std::size_t i = 0; i < lap.dimension(); ++i)
        for (std::size_t k = rows[i]; k < rows[i + 1]; ++k)
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k])) = vals[k];
    return dense;
}

namespace detail {

inline void check_oracle_capacity(const SparseLaplacian& lap, const OracleOptions& options) {
    if (lap.dimension() == 0) throw InputDomainError("cannot decompose an empty graph");
    if (lap.dimension() > options.max_vertices) {
        throw CapacityError("dense eigendecomposition limited to " + std::to_string(options.max_vertices) +
                            " vertices, graph has " + std::to_string(lap.dimension()) +
                            "; downsample the image first");
    }
}

inline void check_length(std::size_t expected, std::size_t actual) {
    if (expected != actual)
        throw InputDomainError("signal length " + std::to_string(actual) + " does not match " +
                               std::to_string(expected) + " vertices");
}

inline Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> f) {
    return {f.data(), static_cast<Eigen::Index>(f.size())};
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

/// Full eigendecomposition L = U diag(lambda) U^T (LAPACK divide and conquer).
inline SpectralDecomposition eigendecompose(const SparseLaplacian& lap, const OracleOptions& options = {}) {
    detail::check_oracle_capacity(lap, options);
    const auto n = static_cast<lapack_int>(lap.dimension());
    SpectralDecomposition out;
    out.dimension = lap.dimension();
    out.eigenvectors = to_dense(lap);
    out.eigenvalues.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.eigenvectors.data(), n,
                                           out.eigenvalues.data());
    if (info != 0) throw NumericalError("dsyevd failed with info=" + std::to_string(info));
    return out;
}

/// Lowest `count` eigenpairs only (LAPACK MRRR on an index range). Still the
/// dense reference path, just without the unused part of the basis.
inline SpectralDecomposition eigendecompose_lowest(const SparseLaplacian& lap, std::size_t count,
                                                   const OracleOptions& options = {}) {
    detail::check_oracle_capacity(lap, options);
    if (count == 0 || count > lap.dimension()) throw InputDomainError("eigenpair count out of range");
    const auto n = static_cast<lapack_int>(lap.dimension());
    const auto k = static_cast<lapack_int>(count);
    Eigen::MatrixXd a = to_dense(lap);
    SpectralDecomposition out;
    out.dimension = lap.dimension();
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, k);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, k,
                                           0.0, &found, out.eigenvalues.data(), out.eigenvectors.data(), n,
                                           support.data());
    if (info != 0 || found != k) throw NumericalError("dsyevr failed with info=" + std::to_string(info));
    out.eigenvalues.conservativeResize(k);
    return out;
}

/// Graph Fourier transform f_hat = U^T f (first pair_count() coefficients for a partial basis).
inline std::vector<double> gft(const SpectralDecomposition& decomp, std::span<const double> f) {
    detail::check_length(decomp.dimension, f.size());
    return detail::to_std(decomp.eigenvectors.transpose() * detail::as_vector(f));
}

inline std::vector<double> igft(const SpectralDecomposition& decomp, std::span<const double> fhat) {
    if (!decomp.complete()) throw InputDomainError("inverse GFT needs a complete eigenbasis");
    detail::check_length(decomp.dimension, fhat.size());
    return detail::to_std(decomp.eigenvectors * detail::as_vector(fhat));
}

/// U h(Lambda) U^T f for any gain function h(lambda).
template <class Response>
    requires std::invocable<Response&, double>
std::vector<double> spectral_filter(const SpectralDecomposition& decomp, std::span<const double> f,
                                    Response&& h) {
    if (!decomp.complete()) throw InputDomainError("spectral filtering needs a complete eigenbasis");
    detail::check_length(decomp.dimension, f.size());
    Eigen::VectorXd coeffs = decomp.eigenvectors.transpose() * detail::as_vector(f);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= static_cast<double>(h(decomp.eigenvalues[i]));
    return detail::to_std(decomp.eigenvectors * coeffs);
}

/// Number of eigenpairs a band of the given fraction covers: ceil(fraction * n).
inline std::size_t band_size(std::size_t dimension, double band_fraction) {
    if (!(band_fraction > 0.0) || band_fraction > 1.0) throw InputDomainError("band fraction must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(band_fraction * static_cast<double>(dimension) - 1e-9));
    return std::clamp<std::size_t>(k, 1, dimension);
}

/// Share of signal energy carried by the lowest ceil(fraction * n) graph frequencies.
/// Works on partial decompositions that hold at least that many pairs; the total
/// energy is then taken from the vertex domain (Parseval).
inline double band_energy(const SpectralDecomposition& decomp, std::span<const double> f, double band_fraction) {
    detail::check_length(decomp.dimension, f.size());
    const std::size_t k = band_size(decomp.dimension, band_fraction);
    if (k > decomp.pair_count()) throw InputDomainError("decomposition does not cover the requested band");
    const auto signal = detail::as_vector(f);
    const double total = signal.squaredNorm();
    if (!(total > 0.0)) throw NumericalError("band energy of an all-zero signal is undefined");
    const Eigen::VectorXd low = decomp.eigenvectors.leftCols(static_cast<Eigen::Index>(k)).transpose() * signal;
    return low.squaredNorm() / total;
}

/// Two-column text dump: eigenvalue and |f_hat| per line.
inline void write_spectrum(std::ostream& os, const SpectralDecomposition& decomp, std::span<const double> f) {
    const std::vector<double> fhat = gft(decomp, f);
    os << "# lambda abs_fhat\n";
    os.precision(12);
    for (std::size_t i = 0; i < fhat.size(); ++i) os << decomp.eigenvalues[static_cast<Eigen::Index>(i)] << ' ' << std::abs(fhat[i]) << '\n';
}

}  // namespace depthgf
