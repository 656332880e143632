#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "depthgf/depthgf.hpp"
#include "test_support.hpp"

using namespace depthgf;
using namespace depthgf::testing;

TEST(DenoiseConfig, DefaultsScaleWithSigma) {
    const auto c = DenoiseConfig::defaults(30.0);
    EXPECT_DOUBLE_EQ(c.initial.delta_th, 180.0);
    EXPECT_DOUBLE_EQ(c.initial.sigma_d, 60.0);
    EXPECT_DOUBLE_EQ(c.initial.sigma_a, 10.0);
    EXPECT_EQ(c.iterations, 8);
    EXPECT_EQ(c.filter.poly_degree, 10);
    EXPECT_DOUBLE_EQ(c.filter.cutoff_divisor, 43.0);
    EXPECT_DOUBLE_EQ(DenoiseConfig::defaults().initial.delta_th, 120.0);
    EXPECT_NO_THROW(c.validate());
}

TEST(UpdateParams, TightensDepthOnly) {
    const WeightParams s = update_params({30.0, 20.0, 10.0, 12.0}, 0.8, 0.8);
    EXPECT_DOUBLE_EQ(s.delta_th, 24.0);
    EXPECT_DOUBLE_EQ(s.sigma_d, 16.0);
    const WeightParams p{100.0, 40.0, 10.0, 12.0};
    const WeightParams q = update_params(p, 0.85, 0.9);
    EXPECT_DOUBLE_EQ(q.delta_th, 85.0);
    EXPECT_DOUBLE_EQ(q.sigma_d, 36.0);
    EXPECT_EQ(q.sigma_a, 10.0);
    EXPECT_EQ(q.sigma_b, 12.0);
    EXPECT_THROW(update_params(p, 1.0, 0.5), InputDomainError);
    EXPECT_THROW(update_params(p, 0.5, 0.0), InputDomainError);
}

TEST(Denoise, ConstantImageIsFixedPoint) {
    for (double level : {0.0, 37.0, 128.0, 255.0}) {
        const RgbdImage img(ColorPlane(20, 17, {120, 50, 200}), DepthPlane(20, 17, level));
        const auto out = denoise(img, DenoiseConfig::defaults(20.0));
        for (double v : out.image.depth().values()) EXPECT_LE(std::abs(v - level), 1e-6);
    }
}

TEST(Denoise, SingleIterationIsManualComposition) {
    const RgbdImage clean = make_synthetic_scene(30, 36);
    const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), 20.0, 4));
    DenoiseConfig config = DenoiseConfig::defaults(20.0);
    config.iterations = 1;
    const auto out = denoise(noisy, config);

    const SimilarityGraph g = build_similarity_graph(noisy, config.initial);
    const SparseLaplacian lap(g);
    const auto fir = design_lowpass(config.filter, lambda_max_bound(lap));
    const DepthPlane manual = clamp_depth(signal_to_depth(apply_fir(lap, extract_depth_signal(noisy), fir), g.labeling()));
    EXPECT_EQ(out.image.depth(), manual);
    ASSERT_EQ(out.trace.size(), 1u);
    EXPECT_EQ(out.trace[0].edge_count, g.edge_count());
    EXPECT_TRUE(out.trace[0].refit);
}

TEST(Denoise, OutputClampedAndColorUntouched) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RgbdImage img = random_image(16, 14, seed);
        DenoiseConfig config = DenoiseConfig::defaults(50.0);
        config.iterations = 3;
        const auto out = denoise(img, config);
        for (double v : out.image.depth().values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 255.0);
        }
        EXPECT_EQ(out.image.rgb(), img.rgb());
        EXPECT_EQ(out.image.lab_a(), img.lab_a());
        EXPECT_EQ(out.image.lab_b(), img.lab_b());
    }
}

TEST(Denoise, DeterministicReruns) {
    const RgbdImage clean = make_synthetic_scene(40, 48, 3);
    const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), 25.0, 9));
    const auto a = denoise(noisy, DenoiseConfig::defaults(25.0));
    const auto b = denoise(noisy, DenoiseConfig::defaults(25.0));
    EXPECT_EQ(a.image.depth(), b.image.depth());
}

TEST(Denoise, TraceTracksTighteningParameters) {
    const RgbdImage clean = make_synthetic_scene(30, 30);
    const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), 20.0, 1));
    DenoiseOptions options;
    options.reference = &clean.depth();
    options.band_energy_max_vertices = 1000;
    int callbacks = 0;
    options.on_iteration = [&](int t, const RgbdImage& img, const SimilarityGraph& g) {
        EXPECT_EQ(t, ++callbacks);
        EXPECT_EQ(g.num_vertices(), img.pixel_count());
    };
    const auto out = denoise(noisy, DenoiseConfig::defaults(20.0), options);
    ASSERT_EQ(out.trace.size(), 8u);
    EXPECT_EQ(callbacks, 8);
    for (std::size_t t = 1; t < out.trace.size(); ++t) {
        EXPECT_NEAR(out.trace[t].params.delta_th, 0.85 * out.trace[t - 1].params.delta_th, 1e-12);
        EXPECT_NEAR(out.trace[t].params.sigma_d, 0.85 * out.trace[t - 1].params.sigma_d, 1e-12);
    }
    for (const auto& r : out.trace) {
        ASSERT_TRUE(r.psnr.has_value());
        ASSERT_TRUE(r.low_band_energy.has_value());
        EXPECT_GT(*r.low_band_energy, 0.0);
        EXPECT_LE(*r.low_band_energy, 1.0 + 1e-12);
    }
    EXPECT_GT(*out.trace.back().psnr, psnr(clean.depth(), noisy.depth()));
}

TEST(Denoise, TighterParametersNeverAddEdges) {
    const RgbdImage img = blocky_image(20, 20, 3);
    WeightParams p{120.0, 50.0, 10.0, 10.0};
    std::size_t previous = build_similarity_graph(img, p).edge_count();
    for (int t = 0; t < 12; ++t) {
        p = update_params(p, 0.85, 0.85);
        const std::size_t count = build_similarity_graph(img, p).edge_count();
        EXPECT_LE(count, previous);
        previous = count;
    }
}

TEST(Denoise, FixedCoefficientModeRefitsOnlyWhenBoundGrows) {
    const RgbdImage clean = make_synthetic_scene(30, 30);
    const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), 20.0, 2));
    DenoiseConfig config = DenoiseConfig::defaults(20.0);
    config.coefficient_mode = CoefficientMode::fixed;
    const auto out = denoise(noisy, config);
    EXPECT_TRUE(out.trace.front().refit);
    for (const auto& r : out.trace) {
        EXPECT_GE(r.lambda_scale, r.lambda_bound);
        if (!r.refit) EXPECT_LE(r.lambda_bound, r.lambda_scale);
    }
}

TEST(Denoise, EdgelessGraphPassesThrough) {
    DepthPlane depth(6, 6);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 6; ++c) depth(r, c) = 20.0 * static_cast<double>((r + c) % 2) + 10.0;
    const RgbdImage img(ColorPlane(6, 6), depth);
    DenoiseConfig config = DenoiseConfig::defaults(1.0);  // cut-off 6 below the 20-level checkerboard steps
    config.iterations = 2;
    const auto out = denoise(img, config);
    EXPECT_EQ(out.trace[0].edge_count, 0u);
    EXPECT_EQ(out.image.depth(), depth);
}

TEST(Denoise, RejectsInvalidConfig) {
    const RgbdImage img(ColorPlane(4, 4), DepthPlane(4, 4));
    DenoiseConfig config;
    config.iterations = 0;
    EXPECT_THROW(denoise(img, config), InputDomainError);
    config = DenoiseConfig{};
    config.gamma_th = 1.2;
    EXPECT_THROW(denoise(img, config), InputDomainError);
}

TEST(Denoise, ImprovesPsnrOnSmallScenes) {
    int improved = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const auto seed = static_cast<std::uint64_t>(trial);
        const RgbdImage clean = make_synthetic_scene(24, 28, seed);
        const double sigma = 10.0 + 4.0 * static_cast<double>(trial % 10);
        const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), sigma, seed + 1000));
        const auto out = denoise(noisy, DenoiseConfig::defaults(sigma));
        if (psnr(clean.depth(), out.image.depth()) > psnr(clean.depth(), noisy.depth())) ++improved;
    }
    EXPECT_GE(improved, 95);
}
