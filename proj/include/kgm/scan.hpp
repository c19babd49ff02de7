#ifndef KGM_SCAN_HPP
#define KGM_SCAN_HPP

#include "kgm/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <optional>

namespace kgm {

struct ScanRecord {
    std::vector<int> index;
    std::vector<std::pair<std::string, double>> parameters;
    std::optional<NoGoVerdict> verdict;
    bool solved = false;
    double phi0 = std::nan("");
    double ode_residual = std::nan("");
    double virial_max = std::nan("");
    std::optional<bool> verified;
    std::string error;  ///< empty unless some requested operation failed
};

struct ScanResult {
    std::string config_hash;
    std::string tool_version;
    std::vector<ScanRecord> records;  ///< grid order, first axis outermost
};

/// Evaluates the requested operations on every grid point with `jobs`
/// workers. When `out_dir` is given, scan.csv is streamed in grid order as
/// points complete and scan.json is written at the end. Per-point failures
/// are recorded, never thrown.
ScanResult run_scan(const Config& config, int jobs, const std::optional<std::filesystem::path>& out_dir);

std::string config_hash(const Config& config);
json to_json(const ScanResult& result);
std::string scan_csv_header(const Config& config);
std::string scan_csv_row(const ScanRecord& record);

}  // namespace kgm

#endif  // KGM_SCAN_HPP
