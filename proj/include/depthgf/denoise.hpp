#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "depthgf/error.hpp"
#include "depthgf/fir.hpp"
#include "depthgf/graph.hpp"
#include "depthgf/image.hpp"
#include "depthgf/laplacian.hpp"
#include "depthgf/metrics.hpp"
#include "depthgf/spectral.hpp"

namespace depthgf {

enum class CoefficientMode {
    refit_each_iteration,  // fit against each iteration's own lambda_max bound
    fixed,                 // fit once on the first graph and reuse the coefficients
};

struct DenoiseConfig {
    WeightParams initial{100.0, 40.0, 10.0, 10.0};
    double gamma_th = 0.85;
    double gamma_d = 0.85;
    int iterations = 8;
    FilterDesign filter;
    CoefficientMode coefficient_mode = CoefficientMode::refit_each_iteration;
    LambdaBound lambda_bound = LambdaBound::degree;

    /// Empirical starting point: cut-off 6 sigma, depth kernel 2 sigma, chroma
    /// kernels 10. Without a noise level, sigma = 20 is assumed. Cut-offs much
    /// below 6 sigma isolate single-pixel noise spikes in the first pass, and an
    /// isolated vertex passes through every later pass unfiltered.
    static DenoiseConfig defaults(std::optional<double> noise_sigma = std::nullopt) {
        const double sigma = (noise_sigma && *noise_sigma > 0.0) ? *noise_sigma : 20.0;
        DenoiseConfig config;
        config.initial.delta_th = 6.0 * sigma;
        config.initial.sigma_d = 2.0 * sigma;
        return config;
    }

    void validate() const {
        initial.validate();
        if (!(gamma_th > 0.0 && gamma_th < 1.0) || !(gamma_d > 0.0 && gamma_d < 1.0))
            throw InputDomainError("reduction factors must lie strictly inside (0, 1)");
        if (iterations < 1) throw InputDomainError("at least one iteration is required");
        filter.validate();
    }
};

/// Tightens the depth cut-off and depth kernel; chroma kernels never change.
inline WeightParams update_params(const WeightParams& params, double gamma_th, double gamma_d) {
    if (!(gamma_th > 0.0 && gamma_th < 1.0) || !(gamma_d > 0.0 && gamma_d < 1.0))
        throw InputDomainError("reduction factors must lie strictly inside (0, 1)");
    WeightParams next = params;
    next.delta_th *= gamma_th;
    next.sigma_d *= gamma_d;
    return next;
}

struct IterationRecord {
    int iteration = 0;  // 1-based
    WeightParams params;
    std::size_t edge_count = 0;
    double lambda_bound = 0.0;
    double lambda_scale = 0.0;
    double fit_residual = 0.0;
    bool refit = false;
    std::optional<double> low_band_energy;
    std::optional<double> psnr;
};

using IterationTrace = std::vector<IterationRecord>;

struct StageTimings {
    double graph_seconds = 0.0;
    double fit_seconds = 0.0;
    double filter_seconds = 0.0;
    double total_seconds = 0.0;
};

struct DenoiseOptions {
    /// Ground truth for per-iteration PSNR in the trace.
    const DepthPlane* reference = nullptr;
    /// Record the low-band energy fraction when the image has at most this many
    /// pixels (dense eigendecomposition per iteration); 0 disables it.
    std::size_t band_energy_max_vertices = 0;
    double band_fraction = 0.1;
    /// Called after each iteration with the new iterate and the graph it was filtered on.
    std::function<void(int, const RgbdImage&, const SimilarityGraph&)> on_iteration;
};

struct DenoiseResult {
    RgbdImage image;
    IterationTrace trace;
    StageTimings timings;
};

/// Iterated color-guided graph filtering: build the similarity graph from the
/// current depth, low-pass it with the vertex-domain polynomial filter, clamp to
/// [0, 255], tighten the depth parameters, repeat.
inline DenoiseResult denoise(const RgbdImage& input, const DenoiseConfig& config, const DenoiseOptions& options = {}) {
    config.validate();
    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    const auto start = clock::now();

    DenoiseResult result{input, {}, {}};
    const auto labeling = VertexLabeling::column_major({input.rows(), input.cols()});
    WeightParams params = config.initial;
    std::optional<FirCoefficients> fixed_fir;

    for (int t = 1; t <= config.iterations; ++t) {
        IterationRecord record;
        record.iteration = t;
        record.params = params;

        auto t0 = clock::now();
        const SimilarityGraph graph = build_similarity_graph(result.image, params, labeling);
        const SparseLaplacian lap(graph);
        const std::vector<double> f = extract_depth_signal(result.image.depth(), labeling);
        result.timings.graph_seconds += seconds_since(t0);
        record.edge_count = graph.edge_count();

        t0 = clock::now();
        const double bound = lambda_max_bound(lap, config.lambda_bound);
        record.lambda_bound = bound;
        std::vector<double> filtered;
        if (bound == 0.0) {
            // No edges survived: every vertex is isolated and the filter reduces to its DC gain.
            result.timings.fit_seconds += seconds_since(t0);
            t0 = clock::now();
            const double dc = butterworth_response(0.0, 1.0, config.filter.order);
            filtered.resize(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) filtered[i] = dc * f[i];
            result.timings.filter_seconds += seconds_since(t0);
        } else {
            const bool need_fit = config.coefficient_mode == CoefficientMode::refit_each_iteration || !fixed_fir ||
                                  bound > fixed_fir->lambda_scale;
            if (need_fit) {
                fixed_fir = design_lowpass(config.filter, bound);
                record.refit = true;
            }
            record.lambda_scale = fixed_fir->lambda_scale;
            record.fit_residual = fixed_fir->fit_residual;
            result.timings.fit_seconds += seconds_since(t0);

            t0 = clock::now();
            filtered = apply_fir(lap, f, *fixed_fir);
            result.timings.filter_seconds += seconds_since(t0);
        }

        if (options.band_energy_max_vertices > 0 && lap.dimension() <= options.band_energy_max_vertices) {
            const double energy = [&] {
                double e = 0.0;
                for (double x : f) e += x * x;
                return e;
            }();
            if (energy > 0.0) {
                const auto decomp = eigendecompose_lowest(lap, band_size(lap.dimension(), options.band_fraction),
                                                          OracleOptions{options.band_energy_max_vertices});
                record.low_band_energy = band_energy(decomp, f, options.band_fraction);
            }
        }

        result.image.set_depth(clamp_depth(signal_to_depth(filtered, labeling)));
        if (options.reference) record.psnr = psnr(*options.reference, result.image.depth());
        if (options.on_iteration) options.on_iteration(t, result.image, graph);

        result.trace.push_back(record);
        if (t < config.iterations) params = update_params(params, config.gamma_th, config.gamma_d);
    }
    result.timings.total_seconds = seconds_since(start);
    return result;
}

}  // namespace depthgf
