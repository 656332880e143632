// depthgf command-line front end: denoise, synthesize, benchmark, spectrum, make-synthetic.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depthgf/depthgf.hpp"

namespace fs = std::filesystem;
using namespace depthgf;

namespace {

int exit_code(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::file: return 2;
    case ErrorCategory::format: return 3;
    case ErrorCategory::alignment: return 4;
    case ErrorCategory::numerical: return 5;
    case ErrorCategory::input_domain: return 6;
    case ErrorCategory::capacity: return 7;
    }
    return 1;
}

struct ConfigFlags {
    std::string config_path;
    std::optional<double> sigma;
    std::optional<int> iterations;
    std::optional<int> poly_degree;
    std::optional<double> cutoff_divisor;
    std::optional<int> order;

    void add_to(CLI::App& app, const char* sigma_help) {
        app.add_option("--config", config_path, "Key-value configuration file");
        if (sigma_help) app.add_option("--sigma", sigma, sigma_help);
        app.add_option("--iterations", iterations, "Number of denoising passes");
        app.add_option("--poly-degree", poly_degree, "Polynomial degree K of the graph filter");
        app.add_option("--cutoff-divisor", cutoff_divisor, "Cutoff lambda_max / divisor (default 43)");
        app.add_option("--order", order, "Butterworth order (default 2)");
    }

    /// defaults(sigma) < config file < environment < flags
    DenoiseConfig resolve(std::optional<double> noise_sigma) const {
        ConfigEntries entries;
        if (!config_path.empty()) entries = read_config_file(config_path);
        const ConfigEntries env = environment_entries();
        entries.insert(entries.end(), env.begin(), env.end());
        if (!noise_sigma) noise_sigma = noise_sigma_of(entries);
        DenoiseConfig config = DenoiseConfig::defaults(noise_sigma);
        apply_config(config, entries);
        if (iterations) config.iterations = *iterations;
        if (poly_degree) config.filter.poly_degree = *poly_degree;
        if (cutoff_divisor) config.filter.cutoff_divisor = *cutoff_divisor;
        if (order) config.filter.order = *order;
        config.validate();
        return config;
    }
};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void write_trace(const fs::path& path, const IterationTrace& trace) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    out.precision(10);
    out << "# iteration delta_th sigma_d sigma_a sigma_b edges lambda_bound lambda_scale fit_residual refit psnr\n";
    for (const auto& r : trace) {
        out << r.iteration << ' ' << r.params.delta_th << ' ' << r.params.sigma_d << ' ' << r.params.sigma_a << ' '
            << r.params.sigma_b << ' ' << r.edge_count << ' ' << r.lambda_bound << ' ' << r.lambda_scale << ' '
            << r.fit_residual << ' ' << (r.refit ? 1 : 0) << ' ' << (r.psnr ? format_double(*r.psnr) : "nan") << '\n';
    }
}

int run_denoise(const std::string& color, const std::string& depth, const std::string& out,
                const std::string& reference_path, const std::string& dump_dir, const ConfigFlags& flags) {
    const DenoiseConfig config = flags.resolve(flags.sigma);
    const RgbdImage image = load_rgbd(color, depth);
    std::optional<DepthPlane> reference;
    if (!reference_path.empty()) reference = load_depth(reference_path);

    DenoiseOptions options;
    if (reference) options.reference = &*reference;
    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        options.on_iteration = [&](int t, const RgbdImage& iterate, const SimilarityGraph& graph) {
            char stem[32];
            std::snprintf(stem, sizeof stem, "iter%02d", t);
            save_depth(fs::path(dump_dir) / (std::string(stem) + "_depth.png"), iterate.depth());
            save_weight_map(fs::path(dump_dir) / (std::string(stem) + "_edges.png"), mean_incident_weight(graph));
            const SparseLaplacian lap(graph);
            const double bound = lambda_max_bound(lap, config.lambda_bound);
            if (bound > 0.0) {
                const FirCoefficients fir = design_lowpass(config.filter, bound);
                std::ofstream design(fs::path(dump_dir) / (std::string(stem) + "_filter.txt"));
                const double lambda_c = bound / config.filter.cutoff_divisor;
                write_filter_design(design, fir, [&](double l) { return butterworth_response(l, lambda_c, config.filter.order); },
                                    config.filter.grid_points);
            }
        };
    }

    const DenoiseResult result = denoise(image, config, options);
    save_depth(out, result.image.depth());
    if (!dump_dir.empty()) {
        write_trace(fs::path(dump_dir) / "trace.txt", result.trace);
        std::ofstream(fs::path(dump_dir) / "config.txt") << format_config(config);
    }

    std::cout << "status=ok rows=" << image.rows() << " cols=" << image.cols() << " iterations=" << config.iterations
              << " seconds=" << format_double(result.timings.total_seconds) << " output=" << out;
    if (reference) {
        std::cout << " input_psnr=" << format_double(psnr(*reference, image.depth()))
                  << " output_psnr=" << format_double(psnr(*reference, load_depth(out)));
    }
    std::cout << '\n';
    return 0;
}

int run_synthesize(const std::string& depth, double sigma, std::uint64_t seed, const std::string& out) {
    const DepthPlane clean = load_depth(depth);
    save_depth(out, add_awgn(clean, sigma, seed));
    std::cout << "status=ok sigma=" << sigma << " seed=" << seed << " psnr=" << format_double(psnr(clean, load_depth(out)))
              << " output=" << out << '\n';
    return 0;
}

std::vector<double> split_reals(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string token;
        while (std::getline(ss, token, ','))
            if (!token.empty()) out.push_back(std::stod(token));
    }
    return out;
}

int run_benchmark_cmd(const std::string& dataset, const std::vector<std::string>& sigma_items,
                      const std::vector<std::string>& seed_items, const std::string& out_dir, unsigned workers,
                      bool no_timing, const ConfigFlags& flags) {
    BenchmarkOptions options;
    options.sigmas = split_reals(sigma_items);
    for (double s : split_reals(seed_items)) options.seeds.push_back(static_cast<std::uint64_t>(s));
    if (options.seeds.empty()) options.seeds = {1};
    options.output_dir = out_dir;
    options.workers = workers;
    options.measure_timing = !no_timing;
    options.config_for_sigma = [&flags](double sigma) { return flags.resolve(sigma); };

    const auto entries = scan_dataset(dataset);
    if (entries.empty() && !options.sigmas.empty()) throw FileError("no color/depth pairs found under " + dataset);
    const BenchmarkReport report = run_benchmark(entries, options);

    fs::create_directories(out_dir);
    std::ofstream table(fs::path(out_dir) / "report.txt");
    write_report_table(table, report);
    std::ofstream records(fs::path(out_dir) / "report.records");
    write_report_records(records, report);
    write_report_table(std::cout, report);
    return 0;
}

int run_spectrum(const std::string& color, const std::string& depth, std::optional<double> sigma, std::uint64_t seed,
                 std::size_t factor, double band_fraction, std::size_t max_vertices, const std::string& out_dir,
                 const ConfigFlags& flags) {
    RgbdImage clean = load_rgbd(color, depth);
    if (factor > 1) clean = downsample(clean, factor);
    const OracleOptions oracle{max_vertices};
    if (clean.pixel_count() > oracle.max_vertices) {
        throw CapacityError(std::to_string(clean.pixel_count()) + " pixels exceed the dense oracle limit of " +
                            std::to_string(oracle.max_vertices) + "; pass --downsample");
    }
    const DenoiseConfig config = flags.resolve(sigma);
    fs::create_directories(out_dir);

    auto analyse = [&](const RgbdImage& image, const std::string& tag) {
        const SimilarityGraph graph = build_similarity_graph(image, config.initial);
        const SparseLaplacian lap(graph);
        const auto decomp = eigendecompose(lap, oracle);
        const auto f = extract_depth_signal(image);
        std::ofstream out(fs::path(out_dir) / ("spectrum_" + tag + ".txt"));
        write_spectrum(out, decomp, f);
        return band_energy(decomp, f, band_fraction);
    };

    std::cout << "status=ok rows=" << clean.rows() << " cols=" << clean.cols() << " band_fraction=" << band_fraction
              << " clean_low_band=" << format_double(analyse(clean, "clean"));
    if (sigma) {
        const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), *sigma, seed));
        std::cout << " noisy_low_band=" << format_double(analyse(noisy, "noisy"));
    }
    std::cout << '\n';
    return 0;
}

int run_make_synthetic(std::size_t rows, std::size_t cols, std::uint64_t seed, const std::string& out_dir,
                       const std::string& format) {
    const RgbdImage scene = make_synthetic_scene(rows, cols, seed);
    fs::create_directories(out_dir);
    const bool png = format == "png";
    const fs::path color = fs::path(out_dir) / (png ? "color.png" : "color.ppm");
    const fs::path depth = fs::path(out_dir) / (png ? "depth.png" : "depth.pgm");
    save_color(color, scene.rgb());
    save_depth(depth, scene.depth());
    std::cout << "status=ok rows=" << rows << " cols=" << cols << " color=" << color.string()
              << " depth=" << depth.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Color-guided depth denoising by vertex-domain graph filtering"};
    app.require_subcommand(1);

    std::string color, depth, out, reference, dump_dir, out_dir, dataset, format = "png";
    std::uint64_t seed = 1;
    std::size_t rows = 376, cols = 448, factor = 1, max_vertices = OracleOptions{}.max_vertices;
    double band_fraction = 0.1;
    double noise_sigma = 0.0;
    unsigned workers = 1;
    bool no_timing = false;
    std::vector<std::string> sigma_items, seed_items;

    ConfigFlags denoise_flags, bench_flags, spectrum_flags;

    auto* cmd_denoise = app.add_subcommand("denoise", "Denoise a depth map guided by its aligned color image");
    cmd_denoise->add_option("--color", color, "Color image (PNG/PPM)")->required();
    cmd_denoise->add_option("--depth", depth, "Noisy depth image (PNG/PGM)")->required();
    cmd_denoise->add_option("--out", out, "Output depth image")->required();
    cmd_denoise->add_option("--reference", reference, "Noise-free depth for PSNR reporting");
    cmd_denoise->add_option("--dump-dir", dump_dir, "Write per-iteration depth, edge maps and trace here");
    denoise_flags.add_to(*cmd_denoise, "Noise level of the input, used to derive default parameters");

    auto* cmd_synth = app.add_subcommand("synthesize", "Add seeded white Gaussian noise to a depth image");
    cmd_synth->add_option("--depth", depth, "Clean depth image")->required();
    cmd_synth->add_option("--sigma", noise_sigma, "Noise standard deviation in depth levels")->required();
    cmd_synth->add_option("--seed", seed, "Noise seed");
    cmd_synth->add_option("--out", out, "Output noisy depth")->required();

    auto* cmd_bench = app.add_subcommand("benchmark", "PSNR and timing over a dataset, noise levels and seeds");
    cmd_bench->add_option("--dataset", dataset, "Directory of scene folders with color.* and depth.*")->required();
    cmd_bench->add_option("--sigmas", sigma_items, "Noise levels (space or comma separated)");
    cmd_bench->add_option("--seed,--seeds", seed_items, "Noise seeds (space or comma separated)");
    cmd_bench->add_option("--out-dir", out_dir, "Directory for outputs and reports")->required();
    cmd_bench->add_option("--workers", workers, "Parallel workers for quality passes");
    cmd_bench->add_flag("--no-timing", no_timing, "Skip the timing passes");
    bench_flags.add_to(*cmd_bench, nullptr);

    auto* cmd_spectrum = app.add_subcommand("spectrum", "Dump graph spectra of the clean (and noisy) depth signal");
    cmd_spectrum->add_option("--color", color, "Color image")->required();
    cmd_spectrum->add_option("--depth", depth, "Clean depth image")->required();
    cmd_spectrum->add_option("--seed", seed, "Noise seed");
    cmd_spectrum->add_option("--downsample", factor, "Block-mean downsampling factor applied first");
    cmd_spectrum->add_option("--band-fraction", band_fraction, "Share of lowest frequencies in the low band");
    cmd_spectrum->add_option("--max-vertices", max_vertices, "Dense oracle size limit");
    cmd_spectrum->add_option("--out-dir", out_dir, "Directory for spectrum tables")->required();
    spectrum_flags.add_to(*cmd_spectrum, "Noise level to add for the noisy spectrum (omit for clean only)");

    auto* cmd_make = app.add_subcommand("make-synthetic", "Write a piecewise-constant synthetic RGB-D scene");
    cmd_make->add_option("--rows", rows, "Height in pixels");
    cmd_make->add_option("--cols", cols, "Width in pixels");
    cmd_make->add_option("--seed", seed, "Layout seed (0 = reference layout)");
    cmd_make->add_option("--format", format, "png or pnm")->check(CLI::IsMember({"png", "pnm"}));
    cmd_make->add_option("--out-dir", out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_denoise->parsed()) return run_denoise(color, depth, out, reference, dump_dir, denoise_flags);
        if (cmd_synth->parsed()) return run_synthesize(depth, noise_sigma, seed, out);
        if (cmd_bench->parsed())
            return run_benchmark_cmd(dataset, sigma_items, seed_items, out_dir, workers, no_timing, bench_flags);
        if (cmd_spectrum->parsed())
            return run_spectrum(color, depth, spectrum_flags.sigma, seed, factor, band_fraction, max_vertices, out_dir,
                                spectrum_flags);
        if (cmd_make->parsed()) return run_make_synthetic(rows, cols, seed, out_dir, format);
    } catch (const Error& e) {
        std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
