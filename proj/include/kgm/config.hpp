#ifndef KGM_CONFIG_HPP
#define KGM_CONFIG_HPP

#include "kgm/io.hpp"
#include "kgm/nogo.hpp"
#include "kgm/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgm {

struct VerifyOptions {
    double tol = 1e-4;
    std::vector<double> alphas{0.0, 0.5, 1.0, 1.5};
    std::vector<std::pair<double, double>> scalings{{1.5, 0.0}, {0.5, 2.0}, {0.0, 3.0}};
    double stationarity_tol = 1e-3;
    double dlambda = 0.01;
};

struct ScanAxis {
    std::string name;  ///< one of omega, gamma, p, g, mu2, e, m
    double min = 0.0;
    double max = 0.0;
    int steps = 1;
};

struct ScanRequest {
    std::vector<ScanAxis> axes;        ///< at most two
    std::vector<std::string> operations{"classify"};  ///< subset of classify, solve, verify
};

/// Everything a CLI run needs. JSON layout:
///
///   {
///     "model":   {"omega": w, "m": m, "e": e, "potential": {"family": ..., ...}},
///     "solver":  {"R_max", "grid_size", "nodes", "bracket": [lo, hi], "tol",
///                 "substeps", "newton_tol", "damping", "max_newton",
///                 "initial_e_step", "min_e_step"},
///     "checker": {"phi_range": [lo, hi], "n", "tol"},
///     "verify":  {"tol", "alphas": [...], "scalings": [[alpha, beta], ...],
///                 "stationarity_tol", "dlambda"},
///     "scan":    {"axes": [{"name", "min", "max", "steps"}], "operations": [...]}
///   }
///
/// Only "model" is required.
struct Config {
    ModelConfig model;
    GaugedOptions solver;
    CheckOptions checker;
    VerifyOptions verify;
    std::optional<ScanRequest> scan;
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);
json to_json(const Config& config);

/// Returns `model` with one named parameter replaced; the potential is
/// re-validated. Throws ConfigError for names that do not apply.
ModelConfig with_parameter(const ModelConfig& model, const std::string& name, double value);

}  // namespace kgm

#endif  // KGM_CONFIG_HPP
