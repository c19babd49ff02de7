#include "kgm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kgm {

namespace {

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed)
{
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown field '" + (path.empty() ? "" : path + ".") + item.key() + "'");
        }
    }
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback)
{
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw ConfigError("field '" + path + "." + key + "' must be a finite number");
    }
    return v.get<double>();
}

long get_integer(const json& j, const std::string& key, const std::string& path, long fallback)
{
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + path + "." + key + "' must be an integer");
    return v.get<long>();
}

std::pair<double, double> get_pair(const json& j, const std::string& key, const std::string& path,
                                   std::pair<double, double> fallback)
{
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError("field '" + path + "." + key + "' must be a [lo, hi] pair of numbers");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) throw ConfigError("field '" + field + "' " + what);
}

void parse_solver(const json& j, GaugedOptions& o)
{
    const std::string path = "solver";
    require(j.is_object(), path, "must be an object");
    reject_unknown(j, path,
                   {"R_max", "grid_size", "nodes", "bracket", "tol", "substeps", "newton_tol", "damping", "max_newton",
                    "initial_e_step", "min_e_step"});
    auto& q = o.seed;
    q.r_max = get_number(j, "R_max", path, q.r_max);
    require(q.r_max >= 0.0, "solver.R_max", "must be >= 0 (0 selects the default)");
    q.grid_size = get_integer(j, "grid_size", path, q.grid_size);
    require(q.grid_size >= 5, "solver.grid_size", "must be >= 5");
    q.nodes = static_cast<int>(get_integer(j, "nodes", path, q.nodes));
    require(q.nodes >= 0, "solver.nodes", "must be >= 0");
    const auto br = get_pair(j, "bracket", path, {q.bracket_lo, q.bracket_hi});
    require(br.first > 0.0 && br.second > br.first, "solver.bracket", "must satisfy 0 < lo < hi");
    q.bracket_lo = br.first;
    q.bracket_hi = br.second;
    q.tol = get_number(j, "tol", path, q.tol);
    require(q.tol > 0.0, "solver.tol", "must be > 0");
    q.substeps = static_cast<int>(get_integer(j, "substeps", path, q.substeps));
    require(q.substeps >= 1, "solver.substeps", "must be >= 1");
    o.tol = get_number(j, "newton_tol", path, o.tol);
    require(o.tol > 0.0, "solver.newton_tol", "must be > 0");
    o.damping = get_number(j, "damping", path, o.damping);
    require(o.damping > 0.0 && o.damping <= 1.0, "solver.damping", "must lie in (0, 1]");
    o.max_newton = static_cast<int>(get_integer(j, "max_newton", path, o.max_newton));
    require(o.max_newton >= 1, "solver.max_newton", "must be >= 1");
    o.initial_e_step = get_number(j, "initial_e_step", path, o.initial_e_step);
    require(o.initial_e_step >= 0.0, "solver.initial_e_step", "must be >= 0");
    o.min_e_step = get_number(j, "min_e_step", path, o.min_e_step);
    require(o.min_e_step > 0.0, "solver.min_e_step", "must be > 0");
}

void parse_checker(const json& j, CheckOptions& o)
{
    const std::string path = "checker";
    require(j.is_object(), path, "must be an object");
    reject_unknown(j, path, {"phi_range", "n", "tol"});
    const auto range = get_pair(j, "phi_range", path, {o.range.lo, o.range.hi});
    require(range.first >= 0.0 && range.second > range.first, "checker.phi_range", "must satisfy 0 <= lo < hi");
    o.range = {range.first, range.second};
    o.n = static_cast<int>(get_integer(j, "n", path, o.n));
    require(o.n >= 16, "checker.n", "must be >= 16");
    o.tol = get_number(j, "tol", path, o.tol);
    require(o.tol > 0.0, "checker.tol", "must be > 0");
}

void parse_verify(const json& j, VerifyOptions& o)
{
    const std::string path = "verify";
    require(j.is_object(), path, "must be an object");
    reject_unknown(j, path, {"tol", "alphas", "scalings", "stationarity_tol", "dlambda"});
    o.tol = get_number(j, "tol", path, o.tol);
    require(o.tol > 0.0, "verify.tol", "must be > 0");
    if (j.contains("alphas")) {
        const json& a = j.at("alphas");
        require(a.is_array(), "verify.alphas", "must be an array of numbers");
        o.alphas.clear();
        for (const auto& x : a) {
            require(x.is_number(), "verify.alphas", "must be an array of numbers");
            o.alphas.push_back(x.get<double>());
        }
    }
    if (j.contains("scalings")) {
        const json& s = j.at("scalings");
        require(s.is_array(), "verify.scalings", "must be an array of [alpha, beta] pairs");
        o.scalings.clear();
        for (const auto& x : s) {
            require(x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number(), "verify.scalings",
                    "must be an array of [alpha, beta] pairs");
            o.scalings.emplace_back(x[0].get<double>(), x[1].get<double>());
        }
    }
    o.stationarity_tol = get_number(j, "stationarity_tol", path, o.stationarity_tol);
    require(o.stationarity_tol > 0.0, "verify.stationarity_tol", "must be > 0");
    o.dlambda = get_number(j, "dlambda", path, o.dlambda);
    require(o.dlambda > 0.0 && o.dlambda < 0.5, "verify.dlambda", "must lie in (0, 0.5)");
}

const std::set<std::string> kScanParameters{"omega", "gamma", "p", "g", "mu2", "e", "m"};

ScanRequest parse_scan(const json& j, const ModelConfig& model)
{
    const std::string path = "scan";
    require(j.is_object(), path, "must be an object");
    reject_unknown(j, path, {"axes", "operations"});
    ScanRequest req;
    if (j.contains("axes")) {
        const json& axes = j.at("axes");
        require(axes.is_array() && axes.size() <= 2, "scan.axes", "must be an array of at most two axes");
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const std::string ap = "scan.axes[" + std::to_string(i) + "]";
            const json& a = axes[i];
            require(a.is_object(), ap, "must be an object");
            reject_unknown(a, ap, {"name", "min", "max", "steps"});
            require(a.contains("name") && a.at("name").is_string(), ap + ".name", "must be a string");
            ScanAxis axis;
            axis.name = a.at("name").get<std::string>();
            require(kScanParameters.count(axis.name) > 0, ap + ".name",
                    "must be one of omega, gamma, p, g, mu2, e, m");
            require(a.contains("min") && a.contains("max"), ap, "needs min and max");
            axis.min = get_number(a, "min", ap, 0.0);
            axis.max = get_number(a, "max", ap, 0.0);
            axis.steps = static_cast<int>(get_integer(a, "steps", ap, 1));
            require(axis.steps >= 1, ap + ".steps", "must be >= 1");
            for (const auto& other : req.axes) require(other.name != axis.name, ap + ".name", "duplicates an axis");
            try {
                (void)with_parameter(model, axis.name, axis.min);
            } catch (const ConfigError& err) {
                throw ConfigError(ap + ": " + err.what());
            }
            req.axes.push_back(axis);
        }
    }
    if (j.contains("operations")) {
        const json& ops = j.at("operations");
        require(ops.is_array() && !ops.empty(), "scan.operations", "must be a non-empty array");
        req.operations.clear();
        for (const auto& op : ops) {
            require(op.is_string(), "scan.operations", "entries must be strings");
            const std::string name = op.get<std::string>();
            require(name == "classify" || name == "solve" || name == "verify", "scan.operations",
                    "entries must be classify, solve or verify");
            if (std::find(req.operations.begin(), req.operations.end(), name) == req.operations.end()) {
                req.operations.push_back(name);
            }
        }
    }
    return req;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte)
{
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ModelConfig with_parameter(const ModelConfig& model, const std::string& name, double value)
{
    ModelConfig out = model;
    const Potential& v = model.potential;
    try {
        if (name == "omega") {
            out = ModelConfig::make(value, model.m, model.e, v);
        } else if (name == "m") {
            out = ModelConfig::make(model.omega, value, model.e, v);
        } else if (name == "e") {
            out = ModelConfig::make(model.omega, model.m, value, v);
        } else if (name == "gamma" || name == "p") {
            if (v.family() != PotentialFamily::PowerLaw) {
                throw ConfigError("parameter '" + name + "' needs a PowerLaw potential");
            }
            out.potential = name == "gamma" ? Potential::power_law(value, v.p()) : Potential::power_law(v.gamma(), value);
        } else if (name == "mu2" || name == "g") {
            if (v.family() == PotentialFamily::Quartic) {
                out.potential = name == "mu2" ? Potential::quartic(value, v.g()) : Potential::quartic(v.mu2(), value);
            } else if (v.family() == PotentialFamily::Logarithmic) {
                out.potential
                    = name == "mu2" ? Potential::logarithmic(value, v.g()) : Potential::logarithmic(v.mu2(), value);
            } else {
                throw ConfigError("parameter '" + name + "' needs a Quartic or Logarithmic potential");
            }
        } else {
            throw ConfigError("unknown scan parameter '" + name + "'");
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError("parameter '" + name + "' = " + format_double(value) + ": " + err.what());
    }
    return out;
}

Config parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        const auto [line, col] = line_column(text, err.byte);
        throw ConfigError("config line " + std::to_string(line) + ", column " + std::to_string(col)
                          + ": JSON syntax error");
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, "", {"model", "solver", "checker", "verify", "scan"});
    if (!j.contains("model")) throw ConfigError("missing field 'model'");

    Config c;
    c.model = model_from_json(j.at("model"));
    if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
    if (j.contains("checker")) parse_checker(j.at("checker"), c.checker);
    if (j.contains("verify")) parse_verify(j.at("verify"), c.verify);
    if (j.contains("scan")) c.scan = parse_scan(j.at("scan"), c.model);
    return c;
}

Config load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

json to_json(const Config& c)
{
    const auto& q = c.solver.seed;
    json j;
    j["model"] = to_json(c.model);
    j["solver"] = json{{"R_max", q.r_max},
                       {"grid_size", q.grid_size},
                       {"nodes", q.nodes},
                       {"bracket", {q.bracket_lo, q.bracket_hi}},
                       {"tol", q.tol},
                       {"substeps", q.substeps},
                       {"newton_tol", c.solver.tol},
                       {"damping", c.solver.damping},
                       {"max_newton", c.solver.max_newton},
                       {"initial_e_step", c.solver.initial_e_step},
                       {"min_e_step", c.solver.min_e_step}};
    j["checker"] = json{{"phi_range", {c.checker.range.lo, c.checker.range.hi}},
                        {"n", c.checker.n},
                        {"tol", c.checker.tol}};
    json scalings = json::array();
    for (const auto& [a, b] : c.verify.scalings) scalings.push_back({a, b});
    j["verify"] = json{{"tol", c.verify.tol},
                       {"alphas", c.verify.alphas},
                       {"scalings", scalings},
                       {"stationarity_tol", c.verify.stationarity_tol},
                       {"dlambda", c.verify.dlambda}};
    if (c.scan) {
        json axes = json::array();
        for (const auto& a : c.scan->axes) {
            axes.push_back(json{{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
        }
        j["scan"] = json{{"axes", axes}, {"operations", c.scan->operations}};
    }
    return j;
}

}  // namespace kgm
