#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "depthgf/error.hpp"
#include "depthgf/laplacian.hpp"

namespace depthgf {

/// Low-pass prototype and the polynomial that approximates it.
struct FilterDesign {
    int order = 2;                 // Butterworth order
    double cutoff_divisor = 43.0;  // lambda_c = lambda_max / cutoff_divisor
    int poly_degree = 10;          // K
    std::size_t grid_points = 256; // least-squares fit grid

    void validate() const {
        if (order < 1) throw InputDomainError("Butterworth order must be >= 1");
        if (!(cutoff_divisor > 1.0)) throw InputDomainError("cutoff divisor must exceed 1");
        if (poly_degree < 2 || poly_degree > 20) throw InputDomainError("polynomial degree must lie in [2, 20]");
        if (grid_points < static_cast<std::size_t>(poly_degree) + 1)
            throw InputDomainError("fit grid needs at least K + 1 points");
    }
};

/// Monomial coefficients c_0..c_K of p(s), applied to the scaled operator
/// L / lambda_scale, so the filter realized is p(L / lambda_scale).
struct FirCoefficients {
    std::vector<double> coeffs;
    double lambda_scale = 1.0;
    double fit_residual = 0.0;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

    /// p(s) in the scaled variable s = lambda / lambda_scale (Horner).
    double evaluate_scaled(double s) const {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
        return acc;
    }

    /// Gain the filter applies at graph frequency lambda.
    double response(double lambda) const { return evaluate_scaled(lambda / lambda_scale); }
};

inline double butterworth_response(double lambda, double lambda_c, int order) {
    if (lambda < 0.0) throw InputDomainError("graph frequency must be non-negative");
    if (!(lambda_c > 0.0)) throw InputDomainError("cutoff frequency must be positive");
    return 1.0 / std::sqrt(1.0 + std::pow(lambda / lambda_c, 2.0 * order));
}

/// Largest-eigenvalue estimate by power iteration (a lower bound on lambda_max).
inline double power_iteration_estimate(const SparseLaplacian& lap, int max_iterations = 100,
                                       double rel_tolerance = 1e-4, std::uint64_t seed = 0x5eed) {
    const std::size_t n = lap.dimension();
    if (n == 0) throw InputDomainError("empty graph");
    if (lap.max_degree() == 0.0) return 0.0;
    std::mt19937_64 gen(seed);
    std::vector<double> v(n), w(n);
    for (double& x : v) x = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    double theta = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        for (double& x : v) x /= norm;
        lap.multiply(v, w);
        double next = 0.0;
        for (std::size_t i = 0; i < n; ++i) next += v[i] * w[i];
        v.swap(w);
        const bool converged = std::abs(next - theta) <= rel_tolerance * std::abs(next);
        theta = next;
        if (converged) break;
    }
    return theta;
}

enum class LambdaBound {
    degree,     // 2 * max degree, always an upper bound
    sharpened,  // power-iteration refinement, between the estimate and the degree bound
};

/// Upper bound on the Laplacian spectral radius used to scale the operator.
/// An edgeless graph yields 0.
inline double lambda_max_bound(const SparseLaplacian& lap, LambdaBound method = LambdaBound::degree) {
    if (lap.dimension() == 0) throw InputDomainError("empty graph has no spectrum");
    const double crude = 2.0 * lap.max_degree();
    if (method == LambdaBound::degree || crude == 0.0) return crude;
    const double estimate = power_iteration_estimate(lap);
    // The Rayleigh quotient converges from below, so pad it before capping at the degree bound.
    return std::min(crude, estimate * 1.01);
}

struct FitOptions {
    /// Constrain p(0) = h(0) so a constant signal passes with exactly the DC gain.
    bool pin_dc = true;
};

/// Least-squares fit of h on a uniform grid of `grid_points` over [0, lambda_max],
/// in the scaled variable s = lambda / lambda_max, solved by column-pivoted QR of
/// the Vandermonde system.
template <class Response>
    requires std::invocable<Response&, double>
FirCoefficients fit_polynomial(Response&& h, double lambda_max, int degree, std::size_t grid_points,
                               const FitOptions& options = {}) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw InputDomainError("lambda_max must be positive");
    if (degree < 0) throw InputDomainError("polynomial degree must be non-negative");
    if (grid_points < static_cast<std::size_t>(degree) + 1 || grid_points < 2)
        throw NumericalError("underdetermined fit: " + std::to_string(grid_points) + " points for degree " +
                             std::to_string(degree));

    const auto p = static_cast<Eigen::Index>(grid_points);
    Eigen::VectorXd s(p), target(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        s[i] = static_cast<double>(i) / static_cast<double>(p - 1);
        target[i] = static_cast<double>(h(s[i] * lambda_max));
    }

    FirCoefficients fir;
    fir.lambda_scale = lambda_max;
    fir.coeffs.assign(static_cast<std::size_t>(degree) + 1, 0.0);

    const int first = options.pin_dc ? 1 : 0;
    const double dc = options.pin_dc ? static_cast<double>(h(0.0)) : 0.0;
    if (options.pin_dc) fir.coeffs[0] = dc;
    const Eigen::Index unknowns = degree + 1 - first;
    if (unknowns > 0) {
        Eigen::MatrixXd vander(p, unknowns);
        for (Eigen::Index i = 0; i < p; ++i) {
            double power = first ? s[i] : 1.0;
            for (Eigen::Index k = 0; k < unknowns; ++k) {
                vander(i, k) = power;
                power *= s[i];
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vander.rows(), vander.cols());
        // The monomial Vandermonde on [0, 1] reaches pivot ratios near 5e-15 at K = 20,
        // just under Eigen's default cut. Only flag pivots at rounding level.
        qr.setThreshold(std::numeric_limits<double>::epsilon());
        qr.compute(vander);
        if (qr.rank() < unknowns) throw NumericalError("rank-deficient Vandermonde system in polynomial fit");
        const Eigen::VectorXd solution = qr.solve((target.array() - dc).matrix());
        for (Eigen::Index k = 0; k < unknowns; ++k) fir.coeffs[static_cast<std::size_t>(k + first)] = solution[k];
    }

    double residual = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) residual = std::max(residual, std::abs(fir.evaluate_scaled(s[i]) - target[i]));
    fir.fit_residual = residual;
    if (!std::isfinite(residual)) throw NumericalError("polynomial fit produced non-finite coefficients");
    return fir;
}

/// Butterworth low-pass at lambda_max / cutoff_divisor, fitted over [0, lambda_max].
inline FirCoefficients design_lowpass(const FilterDesign& design, double lambda_max, const FitOptions& options = {}) {
    design.validate();
    const double lambda_c = lambda_max / design.cutoff_divisor;
    return fit_polynomial([&](double lambda) { return butterworth_response(lambda, lambda_c, design.order); },
                          lambda_max, design.poly_degree, design.grid_points, options);
}

struct FirStats {
    std::size_t spmv_count = 0;
};

namespace detail {

inline void check_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericalError("non-finite value in filter output; lambda_scale is likely stale");
}

}  // namespace detail

/// f_bar = c_0 f + L'(c_1 f + L'(c_2 f + ... + L'(c_K f))), L' = L / lambda_scale.
/// Exactly K sparse matrix-vector products; no matrix powers are formed.
inline std::vector<double> apply_fir(const SparseLaplacian& lap, std::span<const double> f,
                                     const FirCoefficients& fir, FirStats* stats = nullptr) {
    const std::size_t n = lap.dimension();
    if (f.size() != n) throw InputDomainError("signal length does not match the Laplacian");
    if (fir.coeffs.empty()) throw InputDomainError("empty coefficient set");
    const auto& c = fir.coeffs;
    const std::size_t degree = c.size() - 1;

    std::vector<double> acc(n), tmp(n);
    for (std::size_t i = 0; i < n; ++i) acc[i] = c[degree] * f[i];
    const double inv_scale = 1.0 / fir.lambda_scale;
    for (std::size_t k = degree; k-- > 0;) {
        lap.multiply(acc, tmp);
        if (stats) ++stats->spmv_count;
        for (std::size_t i = 0; i < n; ++i) acc[i] = tmp[i] * inv_scale + c[k] * f[i];
    }
    detail::check_finite(acc);
    return acc;
}

inline Eigen::SparseMatrix<double> to_eigen_sparse(const SparseLaplacian& lap) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(lap.nonzeros());
    const auto rows = lap.row_offsets();
    const auto cols = lap.columns();
    const auto vals = lap.values();
    for (std::size_t i = 0; i < lap.dimension(); ++i)
        for (std::size_t k = rows[i]; k < rows[i + 1]; ++k)
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(cols[k]), vals[k]);
    const auto n = static_cast<Eigen::Index>(lap.dimension());
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

/// Reference form sum_k c_k (L')^k f with the matrix polynomial assembled explicitly.
/// Cost grows with the fill-in of the powers; meant for checking apply_fir.
inline std::vector<double> apply_fir_native(const SparseLaplacian& lap, std::span<const double> f,
                                            const FirCoefficients& fir, std::size_t max_vertices = 20000) {
    const std::size_t n = lap.dimension();
    if (f.size() != n) throw InputDomainError("signal length does not match the Laplacian");
    if (fir.coeffs.empty()) throw InputDomainError("empty coefficient set");
    if (n > max_vertices) throw CapacityError("native FIR form limited to " + std::to_string(max_vertices) + " vertices");

    const Eigen::SparseMatrix<double> scaled = to_eigen_sparse(lap) / fir.lambda_scale;
    Eigen::SparseMatrix<double> power(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    power.setIdentity();
    Eigen::SparseMatrix<double> poly = fir.coeffs[0] * power;
    for (std::size_t k = 1; k < fir.coeffs.size(); ++k) {
        power = (power * scaled).pruned();
        poly = (poly + fir.coeffs[k] * power).pruned();
    }
    const Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd y = poly * x;
    std::vector<double> out(y.data(), y.data() + y.size());
    detail::check_finite(out);
    return out;
}

struct OperationCount {
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;

    friend bool operator==(const OperationCount&, const OperationCount&) = default;
};

enum class FirVariant { native, horner };

/// Closed-form scalar operation counts for a dense n x n realization of a
/// k-order FIR graph filter.
inline OperationCount count_dense_operations(std::uint64_t n, std::uint64_t k, FirVariant variant) {
    if (n < 1 || k < 1) throw InputDomainError("count_dense_operations needs n >= 1 and k >= 1");
    if (variant == FirVariant::horner) return {k * n * n + (k + 1) * n, k * n * n};
    const std::uint64_t matmuls = k * (k - 1) / 2;
    // (K(1-K) + 4) / 2 * N^2 is negative for K >= 4, so assemble in signed arithmetic.
    const auto sn = static_cast<std::int64_t>(n);
    const auto sk = static_cast<std::int64_t>(k);
    const std::int64_t adds = static_cast<std::int64_t>(matmuls) * sn * sn * sn + (sk * (1 - sk) + 4) * sn * sn / 2 - sn;
    return {matmuls * n * n * n + (k + 2) * n * n, static_cast<std::uint64_t>(adds)};
}

/// Dense realizations that tally every scalar multiply and add. They exist to
/// check the closed-form counts and are only sensible for tiny n.
namespace counted {

inline Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, OperationCount& ops) {
    Eigen::VectorXd y(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double acc = a(i, 0) * x[0];
        ++ops.multiplications;
        for (Eigen::Index j = 1; j < a.cols(); ++j) {
            acc += a(i, j) * x[j];
            ++ops.multiplications;
            ++ops.additions;
        }
        y[i] = acc;
    }
    return y;
}

inline Eigen::MatrixXd matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, OperationCount& ops) {
    Eigen::MatrixXd c(a.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) c.col(j) = matvec(a, b.col(j), ops);
    return c;
}

inline Eigen::MatrixXd scale(double s, const Eigen::MatrixXd& a, OperationCount& ops) {
    ops.multiplications += static_cast<std::uint64_t>(a.size());
    return s * a;
}

inline Eigen::MatrixXd add(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, OperationCount& ops) {
    ops.additions += static_cast<std::uint64_t>(a.size());
    return a + b;
}

/// Nested form: v = c_K f, then v = L v + c_k f for k = K-1..0.
inline Eigen::VectorXd horner(const Eigen::MatrixXd& lap, const Eigen::VectorXd& f, std::span<const double> c,
                              OperationCount& ops) {
    const std::size_t degree = c.size() - 1;
    Eigen::VectorXd v = c[degree] * f;
    ops.multiplications += static_cast<std::uint64_t>(f.size());
    for (std::size_t k = degree; k-- > 0;) {
        v = matvec(lap, v, ops);
        v += c[k] * f;
        ops.multiplications += static_cast<std::uint64_t>(f.size());
        ops.additions += static_cast<std::uint64_t>(f.size());
    }
    return v;
}

/// Explicit form: each power L^k built from scratch with k - 1 products, every
/// term scaled (c_0 I included) and summed, then one matrix-vector product.
inline Eigen::VectorXd native(const Eigen::MatrixXd& lap, const Eigen::VectorXd& f, std::span<const double> c,
                              OperationCount& ops) {
    const Eigen::Index n = lap.rows();
    Eigen::MatrixXd poly = scale(c[0], Eigen::MatrixXd::Identity(n, n), ops);
    for (std::size_t k = 1; k < c.size(); ++k) {
        Eigen::MatrixXd power = lap;
        for (std::size_t j = 1; j < k; ++j) power = matmul(power, lap, ops);
        poly = add(poly, scale(c[k], power, ops), ops);
    }
    return matvec(poly, f, ops);
}

}  // namespace counted

/// Text table of lambda, target response and fitted response over the fit grid.
template <class Response>
    requires std::invocable<Response&, double>
void write_filter_design(std::ostream& os, const FirCoefficients& fir, Response&& target, std::size_t grid_points) {
    os << "# lambda h_target p_fit\n";
    os.precision(12);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double s = grid_points > 1 ? static_cast<double>(i) / static_cast<double>(grid_points - 1) : 0.0;
        const double lambda = s * fir.lambda_scale;
        os << lambda << ' ' << target(lambda) << ' ' << fir.evaluate_scaled(s) << '\n';
    }
}

}  // namespace depthgf
