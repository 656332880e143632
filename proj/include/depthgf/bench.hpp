#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "depthgf/config.hpp"
#include "depthgf/denoise.hpp"
#include "depthgf/error.hpp"
#include "depthgf/io.hpp"
#include "depthgf/metrics.hpp"
#include "depthgf/noise.hpp"

namespace depthgf {

struct DatasetEntry {
    std::string name;
    std::filesystem::path color;
    std::filesystem::path depth;
};

namespace detail {

inline std::optional<std::filesystem::path> find_with_stem(const std::filesystem::path& dir, const std::string& stem,
                                                           std::initializer_list<const char*> extensions) {
    for (const char* ext : extensions) {
        auto candidate = dir / (stem + ext);
        if (std::filesystem::is_regular_file(candidate)) return candidate;
    }
    return std::nullopt;
}

inline std::optional<DatasetEntry> entry_in(const std::filesystem::path& dir) {
    auto color = find_with_stem(dir, "color", {".png", ".ppm"});
    auto depth = find_with_stem(dir, "depth", {".png", ".pgm"});
    if (!color || !depth) return std::nullopt;
    return DatasetEntry{dir.filename().string(), *color, *depth};
}

}  // namespace detail

/// A dataset is a directory of scene folders, each holding color.{png,ppm} and
/// depth.{png,pgm}. A directory that itself holds such a pair is a one-scene dataset.
inline std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) throw FileError("dataset directory not found: " + root.string());
    if (auto self = detail::entry_in(root)) return {*self};
    std::vector<DatasetEntry> entries;
    for (const auto& item : std::filesystem::directory_iterator(root))
        if (item.is_directory())
            if (auto entry = detail::entry_in(item.path())) entries.push_back(*entry);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return entries;
}

struct BenchmarkOptions {
    std::vector<double> sigmas;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir;
    /// Builds the denoiser configuration for one noise level.
    std::function<DenoiseConfig(double)> config_for_sigma = [](double sigma) { return DenoiseConfig::defaults(sigma); };
    unsigned workers = 1;
    int timing_runs = 3;     // median over these
    int warmup_runs = 1;     // discarded
    bool measure_timing = true;
};

struct BenchmarkCell {
    std::string image;
    double sigma = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t seed_count = 0;
    double noisy_psnr = 0.0;     // mean over seeds
    double denoised_psnr = 0.0;  // mean over seeds
    StageTimings timing;         // per-stage medians
    int iterations = 0;
    std::string config_echo;
    std::string error;           // empty on success
    std::vector<std::filesystem::path> denoised_files;
    std::vector<std::filesystem::path> noisy_files;

    bool ok() const noexcept { return error.empty(); }
};

struct BenchmarkReport {
    std::vector<BenchmarkCell> cells;
};

namespace detail {

inline std::string sigma_tag(double sigma) {
    std::ostringstream os;
    os << sigma;
    return os.str();
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

inline void run_quality(const DatasetEntry& entry, const BenchmarkOptions& options, BenchmarkCell& cell) {
    const RgbdImage clean = load_rgbd(entry.color, entry.depth);
    cell.rows = clean.rows();
    cell.cols = clean.cols();
    const DenoiseConfig config = options.config_for_sigma(cell.sigma);
    cell.iterations = config.iterations;
    cell.config_echo = format_config(config);

    const auto dir = options.output_dir / entry.name;
    std::filesystem::create_directories(dir);
    double noisy_sum = 0.0, denoised_sum = 0.0;
    for (const std::uint64_t seed : options.seeds) {
        const std::string stem = "sigma" + sigma_tag(cell.sigma) + "_seed" + std::to_string(seed);
        const auto noisy_path = dir / (stem + "_noisy.png");
        const auto out_path = dir / (stem + "_denoised.png");
        save_depth(noisy_path, add_awgn(clean.depth(), cell.sigma, seed));
        const RgbdImage noisy = clean.with_depth(load_depth(noisy_path));
        save_depth(out_path, denoise(noisy, config).image.depth());

        // Scores come from the files on disk, not from in-memory buffers.
        const DepthPlane reference = load_depth(entry.depth);
        noisy_sum += psnr(reference, load_depth(noisy_path));
        denoised_sum += psnr(reference, load_depth(out_path));
        cell.noisy_files.push_back(noisy_path);
        cell.denoised_files.push_back(out_path);
    }
    cell.seed_count = options.seeds.size();
    cell.noisy_psnr = noisy_sum / static_cast<double>(cell.seed_count);
    cell.denoised_psnr = denoised_sum / static_cast<double>(cell.seed_count);
}

inline void run_timing(const DatasetEntry& entry, const BenchmarkOptions& options, BenchmarkCell& cell) {
    const RgbdImage clean = load_rgbd(entry.color, entry.depth);
    const RgbdImage noisy = clean.with_depth(add_awgn(clean.depth(), cell.sigma, options.seeds.front()));
    const DenoiseConfig config = options.config_for_sigma(cell.sigma);
    for (int i = 0; i < options.warmup_runs; ++i) (void)denoise(noisy, config);
    std::vector<double> graph, fit, filter, total;
    for (int i = 0; i < std::max(1, options.timing_runs); ++i) {
        const StageTimings t = denoise(noisy, config).timings;
        graph.push_back(t.graph_seconds);
        fit.push_back(t.fit_seconds);
        filter.push_back(t.filter_seconds);
        total.push_back(t.total_seconds);
    }
    cell.timing = {median(graph), median(fit), median(filter), median(total)};
}

}  // namespace detail

/// Runs every (image, sigma) cell over all seeds. Quality passes may run on
/// several workers; timing passes always run one at a time afterwards. A failing
/// cell records its error and the run continues.
inline BenchmarkReport run_benchmark(const std::vector<DatasetEntry>& entries, const BenchmarkOptions& options) {
    BenchmarkReport report;
    if (options.sigmas.empty() || entries.empty()) return report;
    if (options.seeds.empty()) throw InputDomainError("benchmark needs at least one seed");

    std::vector<const DatasetEntry*> cell_entries;
    for (const auto& entry : entries)
        for (const double sigma : options.sigmas) {
            BenchmarkCell cell;
            cell.image = entry.name;
            cell.sigma = sigma;
            report.cells.push_back(std::move(cell));
            cell_entries.push_back(&entry);
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) {
            try {
                detail::run_quality(*cell_entries[i], options, report.cells[i]);
            } catch (const std::exception& e) {
                report.cells[i].error = e.what();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(report.cells.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    if (options.measure_timing) {
        for (std::size_t i = 0; i < report.cells.size(); ++i) {
            if (!report.cells[i].ok()) continue;
            try {
                detail::run_timing(*cell_entries[i], options, report.cells[i]);
            } catch (const std::exception& e) {
                report.cells[i].error = e.what();
            }
        }
    }
    return report;
}

/// Human-readable table, one row per cell.
inline void write_report_table(std::ostream& os, const BenchmarkReport& report) {
    os << std::left << std::setw(16) << "image" << std::right << std::setw(7) << "sigma" << std::setw(11) << "size"
       << std::setw(7) << "seeds" << std::setw(10) << "noisy" << std::setw(10) << "denoised" << std::setw(10)
       << "graph_s" << std::setw(10) << "fit_s" << std::setw(10) << "filter_s" << std::setw(10) << "total_s" << '\n';
    os << std::fixed;
    for (const auto& c : report.cells) {
        os << std::left << std::setw(16) << c.image << std::right << std::setw(7) << std::setprecision(1) << c.sigma;
        if (!c.ok()) {
            os << "  FAILED: " << c.error << '\n';
            continue;
        }
        const std::string size = std::to_string(c.cols) + "x" + std::to_string(c.rows);
        os << std::setw(11) << size << std::setw(7) << c.seed_count << std::setprecision(2) << std::setw(10)
           << c.noisy_psnr << std::setw(10) << c.denoised_psnr << std::setprecision(4) << std::setw(10)
           << c.timing.graph_seconds << std::setw(10) << c.timing.fit_seconds << std::setw(10)
           << c.timing.filter_seconds << std::setw(10) << c.timing.total_seconds << '\n';
    }
    os << std::defaultfloat;
}

/// Line-oriented records: `cell key=value ...` per cell, values without spaces.
/// Errors are reported as status=error with the message in a trailing `message=` field.
inline void write_report_records(std::ostream& os, const BenchmarkReport& report) {
    os.precision(17);
    for (const auto& c : report.cells) {
        os << "cell image=" << c.image << " sigma=" << c.sigma;
        if (!c.ok()) {
            std::string msg = c.error;
            std::replace(msg.begin(), msg.end(), ' ', '_');
            os << " status=error message=" << msg << '\n';
            continue;
        }
        os << " status=ok rows=" << c.rows << " cols=" << c.cols << " seeds=" << c.seed_count
           << " iterations=" << c.iterations << " noisy_psnr=" << c.noisy_psnr << " denoised_psnr=" << c.denoised_psnr
           << " graph_s=" << c.timing.graph_seconds << " fit_s=" << c.timing.fit_seconds
           << " filter_s=" << c.timing.filter_seconds << " total_s=" << c.timing.total_seconds << '\n';
        std::istringstream config(c.config_echo);
        std::string line;
        os << "config image=" << c.image << " sigma=" << c.sigma;
        while (std::getline(config, line)) {
            line.erase(std::remove(line.begin(), line.end(), ' '), line.end());
            os << ' ' << line;
        }
        os << '\n';
    }
}

}  // namespace depthgf
