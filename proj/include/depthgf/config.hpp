#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "depthgf/denoise.hpp"
#include "depthgf/error.hpp"

namespace depthgf {

/// Configuration text format: one `key = value` per line, `#` starts a comment,
/// blank lines ignored. Keys:
///
///   noise_sigma       noise level used to derive the defaults
///   delta_th          initial depth cut-off
///   sigma_d           initial depth kernel width
///   sigma_a, sigma_b  chroma kernel widths
///   gamma_th, gamma_d reduction factors in (0, 1)
///   iterations        number of passes
///   order             Butterworth order
///   cutoff_divisor    lambda_c = lambda_max / cutoff_divisor
///   poly_degree       K
///   grid_points       fit grid size
///   coefficient_mode  refit | fixed
///   lambda_bound      degree | sharpened
///
/// Every key can also be set through the environment as DEPTHGF_<KEY> (upper case).
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kConfigKeys[] = {
    "noise_sigma", "delta_th",       "sigma_d",     "sigma_a",     "sigma_b",          "gamma_th",     "gamma_d",
    "iterations",  "order",          "cutoff_divisor", "poly_degree", "grid_points", "coefficient_mode", "lambda_bound",
};

inline constexpr const char* kEnvPrefix = "DEPTHGF_";

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) throw InputDomainError("config key '" + key + "': not a number: " + value);
    return out;
}

inline long parse_integer(const std::string& key, const std::string& value) {
    const double v = parse_real(key, value);
    if (v != static_cast<double>(static_cast<long>(v)))
        throw InputDomainError("config key '" + key + "': not an integer: " + value);
    return static_cast<long>(v);
}

}  // namespace detail

inline ConfigEntries parse_config(std::istream& in, const std::string& source = "config") {
    ConfigEntries entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputDomainError(source + ":" + std::to_string(number) + ": expected key = value");
        entries.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return entries;
}

inline ConfigEntries read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open config " + path.string());
    return parse_config(in, path.string());
}

inline ConfigEntries environment_entries(const char* prefix = kEnvPrefix) {
    ConfigEntries entries;
    for (const char* key : kConfigKeys) {
        std::string name = prefix;
        for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
        if (const char* value = std::getenv(name.c_str())) entries.emplace_back(key, value);
    }
    return entries;
}

/// Last `noise_sigma` among the entries, if any.
inline std::optional<double> noise_sigma_of(const ConfigEntries& entries) {
    std::optional<double> sigma;
    for (const auto& [key, value] : entries)
        if (key == "noise_sigma") sigma = detail::parse_real(key, value);
    return sigma;
}

inline void apply_config(DenoiseConfig& config, const ConfigEntries& entries) {
    for (const auto& [key, value] : entries) {
        if (key == "noise_sigma") continue;
        else if (key == "delta_th") config.initial.delta_th = detail::parse_real(key, value);
        else if (key == "sigma_d") config.initial.sigma_d = detail::parse_real(key, value);
        else if (key == "sigma_a") config.initial.sigma_a = detail::parse_real(key, value);
        else if (key == "sigma_b") config.initial.sigma_b = detail::parse_real(key, value);
        else if (key == "gamma_th") config.gamma_th = detail::parse_real(key, value);
        else if (key == "gamma_d") config.gamma_d = detail::parse_real(key, value);
        else if (key == "iterations") config.iterations = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "order") config.filter.order = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "cutoff_divisor") config.filter.cutoff_divisor = detail::parse_real(key, value);
        else if (key == "poly_degree") config.filter.poly_degree = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "grid_points") {
            const long points = detail::parse_integer(key, value);
            if (points < 2) throw InputDomainError("grid_points must be at least 2");
            config.filter.grid_points = static_cast<std::size_t>(points);
        } else if (key == "coefficient_mode") {
            if (value == "refit") config.coefficient_mode = CoefficientMode::refit_each_iteration;
            else if (value == "fixed") config.coefficient_mode = CoefficientMode::fixed;
            else throw InputDomainError("coefficient_mode must be 'refit' or 'fixed'");
        } else if (key == "lambda_bound") {
            if (value == "degree") config.lambda_bound = LambdaBound::degree;
            else if (value == "sharpened") config.lambda_bound = LambdaBound::sharpened;
            else throw InputDomainError("lambda_bound must be 'degree' or 'sharpened'");
        } else {
            throw InputDomainError("unknown config key '" + key + "'");
        }
    }
}

/// Renders a config in the file format above; parse_config() reads it back.
inline std::string format_config(const DenoiseConfig& config) {
    std::ostringstream os;
    os.precision(17);
    os << "delta_th = " << config.initial.delta_th << '\n'
       << "sigma_d = " << config.initial.sigma_d << '\n'
       << "sigma_a = " << config.initial.sigma_a << '\n'
       << "sigma_b = " << config.initial.sigma_b << '\n'
       << "gamma_th = " << config.gamma_th << '\n'
       << "gamma_d = " << config.gamma_d << '\n'
       << "iterations = " << config.iterations << '\n'
       << "order = " << config.filter.order << '\n'
       << "cutoff_divisor = " << config.filter.cutoff_divisor << '\n'
       << "poly_degree = " << config.filter.poly_degree << '\n'
       << "grid_points = " << config.filter.grid_points << '\n'
       << "coefficient_mode = " << (config.coefficient_mode == CoefficientMode::fixed ? "fixed" : "refit") << '\n'
       << "lambda_bound = " << (config.lambda_bound == LambdaBound::sharpened ? "sharpened" : "degree") << '\n';
    return os.str();
}

}  // namespace depthgf
