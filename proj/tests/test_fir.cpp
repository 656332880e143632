#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "depthgf/depthgf.hpp"
#include "test_support.hpp"

using namespace depthgf;
using namespace depthgf::testing;

namespace {

FirCoefficients random_coefficients(int degree, double scale, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FirCoefficients fir;
    fir.lambda_scale = scale;
    for (int k = 0; k <= degree; ++k) fir.coeffs.push_back(u(gen));
    return fir;
}

}  // namespace

TEST(Butterworth, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(butterworth_response(0.0, 1.0, 2), 1.0);
    EXPECT_NEAR(butterworth_response(1.0, 1.0, 2), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(butterworth_response(2.0, 1.0, 2), 1.0 / std::sqrt(17.0), 1e-15);
    EXPECT_NEAR(1.0 / std::sqrt(17.0), 0.242535625, 1e-9);
    EXPECT_THROW(butterworth_response(-1.0, 1.0, 2), InputDomainError);
    EXPECT_THROW(butterworth_response(1.0, 0.0, 2), InputDomainError);
}

TEST(PolynomialFit, ReproducesPolynomialTargetsExactly) {
    const auto constant = fit_polynomial([](double) { return 0.7; }, 8.0, 4, 64);
    EXPECT_NEAR(constant.coeffs[0], 0.7, 1e-12);
    for (std::size_t k = 1; k < constant.coeffs.size(); ++k) EXPECT_NEAR(constant.coeffs[k], 0.0, 1e-10);
    EXPECT_LE(constant.fit_residual, 1e-12);

    for (bool pin : {true, false}) {
        const auto linear = fit_polynomial([](double l) { return 2.0 - 0.25 * l; }, 8.0, 3, 64, FitOptions{pin});
        EXPECT_NEAR(linear.coeffs[0], 2.0, 1e-10);
        EXPECT_NEAR(linear.coeffs[1], -2.0, 1e-10);  // scaled variable: -0.25 * 8
        EXPECT_LE(linear.fit_residual, 1e-10);
        EXPECT_NEAR(linear.response(4.0), 1.0, 1e-10);
    }
}

TEST(PolynomialFit, HighestSupportedDegree) {
    FilterDesign design;
    design.poly_degree = 20;
    for (bool pin : {true, false}) {
        const auto fir = design_lowpass(design, 7.0, FitOptions{pin});
        EXPECT_EQ(fir.degree(), 20);
        EXPECT_LT(fir.fit_residual, 0.1);
    }
}

TEST(PolynomialFit, RejectsBadInput) {
    auto h = [](double) { return 1.0; };
    EXPECT_THROW(fit_polynomial(h, 1.0, 10, 5), NumericalError);
    EXPECT_THROW(fit_polynomial(h, 0.0, 2, 16), InputDomainError);
    EXPECT_THROW(fit_polynomial(h, std::numeric_limits<double>::infinity(), 2, 16), InputDomainError);
    EXPECT_THROW((FilterDesign{2, 43.0, 1, 256}.validate()), InputDomainError);
    EXPECT_THROW((FilterDesign{2, 43.0, 21, 256}.validate()), InputDomainError);
    EXPECT_THROW((FilterDesign{0, 43.0, 10, 256}.validate()), InputDomainError);
}

TEST(PolynomialFit, DcPinKeepsUnitGainAtZero) {
    const FilterDesign design;
    const auto fir = design_lowpass(design, 12.0);
    EXPECT_EQ(fir.coeffs[0], 1.0);
    EXPECT_EQ(fir.degree(), 10);
    EXPECT_DOUBLE_EQ(fir.lambda_scale, 12.0);
    // the residual is a property of the scaled problem, independent of lambda_max
    EXPECT_NEAR(design_lowpass(design, 3.0).fit_residual, fir.fit_residual, 1e-9);
}

TEST(LambdaBound, BoundsTheSpectrum) {
    std::mt19937_64 gen(3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SparseLaplacian lap(build_similarity_graph(blocky_image(8, 7, seed), random_params(gen)));
        const double true_max = eigendecompose(lap).eigenvalues.maxCoeff();
        const double crude = lambda_max_bound(lap, LambdaBound::degree);
        const double sharp = lambda_max_bound(lap, LambdaBound::sharpened);
        EXPECT_GE(crude, true_max * (1 - 1e-12));
        EXPECT_LE(sharp, crude);
        EXPECT_LE(power_iteration_estimate(lap), true_max * (1 + 1e-12));
    }
}

TEST(LambdaBound, TwoVertexPathIsTight) {
    const SparseLaplacian lap(explicit_graph(2, {{0, 1, 0.6}}));
    EXPECT_DOUBLE_EQ(lambda_max_bound(lap, LambdaBound::degree), 1.2);
    EXPECT_NEAR(lambda_max_bound(lap, LambdaBound::sharpened), 1.2, 1e-12);
}

TEST(LambdaBound, EdgelessGraphHasZeroBound) {
    const SparseLaplacian lap(explicit_graph(4, {}));
    EXPECT_EQ(lambda_max_bound(lap), 0.0);
    EXPECT_EQ(lambda_max_bound(lap, LambdaBound::sharpened), 0.0);
}

TEST(ApplyFir, HornerMatchesNativeAndSpectral) {
    std::mt19937_64 gen(17);
    for (int degree = 1; degree <= 12; ++degree) {
        const RgbdImage img = blocky_image(6, 5, static_cast<std::uint64_t>(degree));
        const SparseLaplacian lap(build_similarity_graph(img, random_params(gen)));
        const auto f = extract_depth_signal(img);
        const auto fir = random_coefficients(degree, lambda_max_bound(lap), static_cast<std::uint64_t>(degree));
        const auto fast = apply_fir(lap, f, fir);
        const double tol = 1e-9 * inf_norm(f);
        EXPECT_LE(max_abs_diff(fast, apply_fir_native(lap, f, fir)), tol) << "K=" << degree;
        const auto exact = spectral_filter(eigendecompose(lap), f, [&](double l) { return fir.response(l); });
        EXPECT_LE(max_abs_diff(fast, exact), tol) << "K=" << degree;
    }
}

TEST(ApplyFir, TenByTenGridDegreeEight) {
    std::mt19937_64 gen(8);
    const RgbdImage img = random_image(10, 10, 8);
    const SparseLaplacian lap(build_similarity_graph(img, random_params(gen)));
    const auto f = extract_depth_signal(img);
    FilterDesign design;
    design.poly_degree = 8;
    const auto fir = design_lowpass(design, lambda_max_bound(lap));
    const auto fast = apply_fir(lap, f, fir);
    EXPECT_LE(max_abs_diff(fast, apply_fir_native(lap, f, fir)), 1e-9 * inf_norm(f));
    const auto exact = spectral_filter(eigendecompose(lap), f, [&](double l) { return fir.response(std::max(l, 0.0)); });
    EXPECT_LE(max_abs_diff(fast, exact), 1e-8 * inf_norm(f));
}

TEST(ApplyFir, DegreeZeroAndOne) {
    const RgbdImage img = random_image(4, 5, 6);
    const SparseLaplacian lap(build_similarity_graph(img, {200.0, 50.0, 20.0, 20.0}));
    const auto f = extract_depth_signal(img);
    const FirCoefficients k0{{0.75}, 3.0, 0.0};
    const FirCoefficients k1{{0.75, -0.5}, 3.0, 0.0};
    const auto lf = lap * f;
    for (const auto& out : {apply_fir(lap, f, k0), apply_fir_native(lap, f, k0)})
        for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(out[i], 0.75 * f[i], 1e-12);
    for (const auto& out : {apply_fir(lap, f, k1), apply_fir_native(lap, f, k1)})
        for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(out[i], 0.75 * f[i] - 0.5 * lf[i] / 3.0, 1e-10);
}

TEST(ApplyFir, EdgelessAndConstantSignalsScaleByDcCoefficient) {
    const FirCoefficients fir = design_lowpass(FilterDesign{}, 5.0, FitOptions{false});
    const auto f = random_signal(6, 1);
    const SparseLaplacian empty(explicit_graph(6, {}));
    for (const auto& out : {apply_fir(empty, f, fir), apply_fir_native(empty, f, fir)})
        for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(out[i], fir.coeffs[0] * f[i], 1e-12 * f[i]);

    const RgbdImage img = random_image(5, 6, 3);
    const SparseLaplacian lap(build_similarity_graph(img, {200.0, 50.0, 20.0, 20.0}));
    const std::vector<double> flat(lap.dimension(), 140.0);
    for (double v : apply_fir(lap, flat, fir)) EXPECT_NEAR(v, fir.coeffs[0] * 140.0, 1e-10 * 140.0);
}

TEST(ApplyFir, UsesExactlyKProducts) {
    const RgbdImage img = random_image(5, 5, 1);
    const SparseLaplacian lap(build_similarity_graph(img, {200.0, 50.0, 20.0, 20.0}));
    const auto f = extract_depth_signal(img);
    for (int degree = 0; degree <= 12; ++degree) {
        FirStats stats;
        (void)apply_fir(lap, f, random_coefficients(degree, 4.0, 1), &stats);
        EXPECT_EQ(stats.spmv_count, static_cast<std::size_t>(degree));
    }
}

TEST(ApplyFir, RejectsMismatchAndOverflow) {
    const RgbdImage img = random_image(4, 4, 1);
    const SparseLaplacian lap(build_similarity_graph(img, {200.0, 50.0, 20.0, 20.0}));
    const auto f = extract_depth_signal(img);
    FirCoefficients fir = random_coefficients(3, 1.0, 2);
    EXPECT_THROW(apply_fir(lap, std::vector<double>(3), fir), InputDomainError);
    EXPECT_THROW(apply_fir(lap, f, FirCoefficients{}), InputDomainError);
    FirCoefficients huge;
    huge.coeffs = {0.0, 1e300, 1e300, 1e300};
    huge.lambda_scale = 1e-300;
    EXPECT_THROW(apply_fir(lap, f, huge), NumericalError);
    EXPECT_THROW(apply_fir_native(lap, f, fir, 10), CapacityError);
}

TEST(ApplyFir, LabelingEquivariance) {
    std::mt19937_64 gen(23);
    const FilterDesign design;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RgbdImage img = blocky_image(7, 6, seed);
        const WeightParams p = random_params(gen);
        std::vector<std::size_t> perm(42);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        const auto base = VertexLabeling::column_major({7, 6});
        const auto shuffled = VertexLabeling::from_permutation({7, 6}, perm);
        auto run = [&](const VertexLabeling& labeling) {
            const SparseLaplacian lap(build_similarity_graph(img, p, labeling));
            const auto fir = design_lowpass(design, lambda_max_bound(lap));
            return signal_to_depth(apply_fir(lap, extract_depth_signal(img.depth(), labeling), fir), labeling);
        };
        const DepthPlane a = run(base), b = run(shuffled);
        EXPECT_LE(max_abs_diff(a.values(), b.values()), 1e-10);
        EXPECT_EQ(a, b);
    }
}

TEST(OperationCounts, ClosedFormExamples) {
    EXPECT_EQ(count_dense_operations(4, 3, FirVariant::horner), (OperationCount{3 * 16 + 4 * 4, 3 * 16}));
    EXPECT_EQ(count_dense_operations(4, 3, FirVariant::horner).multiplications, 64u);
    EXPECT_EQ(count_dense_operations(4, 3, FirVariant::horner).additions, 48u);
    EXPECT_EQ(count_dense_operations(4, 3, FirVariant::native).multiplications, 3u * 64u + 5u * 16u);
    EXPECT_EQ(count_dense_operations(4, 3, FirVariant::native).multiplications, 272u);
    EXPECT_EQ(count_dense_operations(1, 1, FirVariant::horner).multiplications, 3u);
    EXPECT_THROW(count_dense_operations(0, 1, FirVariant::horner), InputDomainError);
}

TEST(OperationCounts, InstrumentedHornerMatchesClosedForm) {
    for (std::uint64_t n : {1u, 2u, 3u, 5u})
        for (std::uint64_t k : {1u, 2u, 3u, 4u, 6u}) {
            const auto sz = static_cast<Eigen::Index>(n);
            const Eigen::MatrixXd l = Eigen::MatrixXd::Random(sz, sz);
            const Eigen::VectorXd f = Eigen::VectorXd::Random(sz);
            const std::vector<double> c(k + 1, 0.5);
            OperationCount ops;
            const Eigen::VectorXd y = counted::horner(l, f, c, ops);
            EXPECT_EQ(ops, count_dense_operations(n, k, FirVariant::horner)) << "n=" << n << " k=" << k;
            OperationCount native_ops;
            EXPECT_LE((counted::native(l, f, c, native_ops) - y).cwiseAbs().maxCoeff(), 1e-10);
        }
}

TEST(OperationCounts, InstrumentedNativeMultiplications) {
    for (std::uint64_t n : {1u, 2u, 3u, 5u})
        for (std::uint64_t k : {1u, 2u, 3u, 4u, 6u}) {
            const auto sz = static_cast<Eigen::Index>(n);
            OperationCount ops;
            (void)counted::native(Eigen::MatrixXd::Random(sz, sz), Eigen::VectorXd::Random(sz),
                                  std::vector<double>(k + 1, 0.5), ops);
            const OperationCount expected = count_dense_operations(n, k, FirVariant::native);
            EXPECT_EQ(ops.multiplications, expected.multiplications) << "n=" << n << " k=" << k;
            // The closed-form addition count undercounts by (K-1) N^2 for this schedule.
            EXPECT_EQ(ops.additions, expected.additions + (k - 1) * n * n) << "n=" << n << " k=" << k;
        }
}

TEST(FilterDesignDump, OneLinePerGridPoint) {
    const auto fir = design_lowpass(FilterDesign{}, 10.0);
    std::ostringstream os;
    write_filter_design(os, fir, [](double l) { return butterworth_response(l, 10.0 / 43.0, 2); }, 256);
    const std::string text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 257);
}
