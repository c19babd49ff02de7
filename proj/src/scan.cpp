#include "kgm/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <condition_variable>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace kgm {

namespace {

std::vector<double> axis_values(const ScanAxis& axis)
{
    if (axis.steps == 1) return {axis.min};
    const Eigen::ArrayXd v = Eigen::ArrayXd::LinSpaced(axis.steps, axis.min, axis.max);
    return {v.data(), v.data() + v.size()};
}

bool wants(const ScanRequest& req, const char* op)
{
    return std::find(req.operations.begin(), req.operations.end(), op) != req.operations.end();
}

void append_error(std::string& error, const std::string& what)
{
    if (!error.empty()) error += "; ";
    error += what;
}

ScanRecord evaluate_point(const Config& config, const ScanRequest& req, std::vector<int> index,
                          std::vector<std::pair<std::string, double>> params)
{
    ScanRecord rec;
    rec.index = std::move(index);
    rec.parameters = std::move(params);
    ModelConfig model = config.model;
    try {
        for (const auto& [name, value] : rec.parameters) model = with_parameter(model, name, value);
    } catch (const std::exception& err) {
        rec.error = err.what();
        return rec;
    }
    if (wants(req, "classify")) {
        try {
            rec.verdict = run_check(model, config.checker).aggregate;
        } catch (const std::exception& err) {
            append_error(rec.error, std::string("classify: ") + err.what());
        }
    }
    if (wants(req, "solve") || wants(req, "verify")) {
        try {
            const RadialProfile profile = run_solve(model, config.solver);
            rec.solved = true;
            rec.phi0 = profile.phi(0);
            rec.ode_residual = profile.ode_residual;
            if (wants(req, "verify")) {
                const VerifyReport rep = run_verify(profile, config.verify);
                rec.virial_max = rep.max_residual;
                rec.verified = rep.pass;
            }
        } catch (const std::exception& err) {
            append_error(rec.error, std::string("solve: ") + err.what());
        }
    }
    // Keep CSV rows single-line.
    for (char& c : rec.error) {
        if (c == '\n' || c == ',') c = ' ';
    }
    return rec;
}

}  // namespace

std::string config_hash(const Config& config)
{
    const std::string canonical = to_json(config).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string scan_csv_header(const Config& config)
{
    std::string h = "index";
    if (config.scan) {
        for (const auto& a : config.scan->axes) h += "," + a.name;
    }
    return h + ",status,condition,solved,phi0,ode_residual,virial_max,verified,error";
}

std::string scan_csv_row(const ScanRecord& r)
{
    std::string row;
    for (std::size_t k = 0; k < r.index.size(); ++k) row += (k ? ":" : "") + std::to_string(r.index[k]);
    if (r.index.empty()) row = "0";
    for (const auto& [name, value] : r.parameters) row += "," + format_double(value);
    row += "," + (r.verdict ? std::string(to_string(r.verdict->status)) : std::string());
    row += "," + (r.verdict ? r.verdict->condition : std::string());
    row += std::string(",") + (r.solved ? "true" : "false");
    row += "," + format_double(r.phi0);
    row += "," + format_double(r.ode_residual);
    row += "," + format_double(r.virial_max);
    row += "," + (r.verified ? std::string(*r.verified ? "true" : "false") : std::string());
    row += "," + r.error;
    return row;
}

json to_json(const ScanResult& result)
{
    json records = json::array();
    for (const auto& r : result.records) {
        json params = json::object();
        for (const auto& [name, value] : r.parameters) params[name] = value;
        json rec{{"index", r.index}, {"parameters", params}, {"solved", r.solved}};
        rec["verdict"] = r.verdict ? to_json(*r.verdict) : json(nullptr);
        rec["phi0"] = std::isfinite(r.phi0) ? json(r.phi0) : json(nullptr);
        rec["ode_residual"] = std::isfinite(r.ode_residual) ? json(r.ode_residual) : json(nullptr);
        rec["virial_max"] = std::isfinite(r.virial_max) ? json(r.virial_max) : json(nullptr);
        rec["verified"] = r.verified ? json(*r.verified) : json(nullptr);
        rec["error"] = r.error.empty() ? json(nullptr) : json(r.error);
        records.push_back(std::move(rec));
    }
    return json{{"provenance", {{"config_hash", result.config_hash}, {"tool_version", result.tool_version}}},
                {"records", records}};
}

ScanResult run_scan(const Config& config, int jobs, const std::optional<std::filesystem::path>& out_dir)
{
    const ScanRequest req = config.scan.value_or(ScanRequest{});
    std::vector<std::vector<double>> values;
    for (const auto& a : req.axes) values.push_back(axis_values(a));

    // Row-major enumeration of the grid, first axis outermost.
    std::vector<std::vector<int>> points{{}};
    for (const auto& v : values) {
        std::vector<std::vector<int>> next;
        for (const auto& p : points) {
            for (int k = 0; k < static_cast<int>(v.size()); ++k) {
                auto q = p;
                q.push_back(k);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }

    ScanResult result;
    result.config_hash = config_hash(config);
    result.tool_version = kToolVersion;
    result.records.resize(points.size());

    std::ofstream csv;
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        csv.open(*out_dir / "scan.csv");
        if (!csv) throw ConfigError("cannot write " + (*out_dir / "scan.csv").string());
        csv << scan_csv_header(config) << '\n' << std::flush;
    }

    std::mutex mutex;
    std::vector<bool> done(points.size(), false);
    std::size_t flushed = 0;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            std::vector<std::pair<std::string, double>> params;
            for (std::size_t a = 0; a < req.axes.size(); ++a) {
                params.emplace_back(req.axes[a].name, values[a][static_cast<std::size_t>(points[i][a])]);
            }
            ScanRecord rec = evaluate_point(config, req, points[i], std::move(params));
            std::lock_guard<std::mutex> lock(mutex);
            result.records[i] = std::move(rec);
            done[i] = true;
            while (flushed < points.size() && done[flushed]) {
                if (csv.is_open()) csv << scan_csv_row(result.records[flushed]) << '\n' << std::flush;
                ++flushed;
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (out_dir) {
        std::ofstream js(*out_dir / "scan.json");
        js << to_json(result).dump(2) << '\n';
    }
    return result;
}

}  // namespace kgm
