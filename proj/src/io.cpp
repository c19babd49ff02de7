#include "kgm/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace kgm {

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

double number_field(const json& j, const std::string& key, const std::string& path)
{
    if (!j.contains(key)) throw ConfigError("missing field '" + path + "." + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("field '" + path + "." + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("field '" + path + "." + key + "' must be finite");
    return x;
}

double optional_number(const json& j, const std::string& key, const std::string& path, double fallback)
{
    return j.contains(key) ? number_field(j, key, path) : fallback;
}

json vector_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const json& j, const std::string& path)
{
    if (!j.is_array()) throw ConfigError("field '" + path + "' must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError("field '" + path + "[" + std::to_string(i) + "]' must be a number");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace

json to_json(const Potential& v)
{
    json j;
    j["family"] = std::string(to_string(v.family()));
    switch (v.family()) {
    case PotentialFamily::PowerLaw:
        j["gamma"] = v.gamma();
        j["p"] = v.p();
        break;
    case PotentialFamily::Quartic:
    case PotentialFamily::Logarithmic:
        j["mu2"] = v.mu2();
        j["g"] = v.g();
        break;
    case PotentialFamily::Polynomial: {
        json coeffs = json::array();
        for (const auto& t : v.terms()) coeffs.push_back(json::array({t.power, t.coefficient}));
        j["coeffs"] = coeffs;
        break;
    }
    }
    return j;
}

Potential potential_from_json(const json& j, const std::string& path)
{
    if (!j.is_object()) throw ConfigError("field '" + path + "' must be an object");
    if (!j.contains("family") || !j.at("family").is_string()) {
        throw ConfigError("missing string field '" + path + ".family'");
    }
    try {
        switch (potential_family_from_string(j.at("family").get<std::string>())) {
        case PotentialFamily::PowerLaw:
            return Potential::power_law(number_field(j, "gamma", path), number_field(j, "p", path));
        case PotentialFamily::Quartic:
            return Potential::quartic(number_field(j, "mu2", path), number_field(j, "g", path));
        case PotentialFamily::Logarithmic:
            return Potential::logarithmic(number_field(j, "mu2", path), number_field(j, "g", path));
        case PotentialFamily::Polynomial: {
            if (!j.contains("coeffs") || !j.at("coeffs").is_array()) {
                throw ConfigError("field '" + path + ".coeffs' must be an array of [power, coefficient] pairs");
            }
            std::vector<Potential::Term> terms;
            for (const auto& pair : j.at("coeffs")) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number()) {
                    throw ConfigError("field '" + path + ".coeffs' entries must be [even power, coefficient]");
                }
                terms.push_back({pair[0].get<int>(), pair[1].get<double>()});
            }
            return Potential::polynomial(std::move(terms));
        }
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError("field '" + path + "': " + err.what());
    }
    throw ConfigError("field '" + path + "': unsupported family");
}

json to_json(const ModelConfig& model)
{
    return json{{"omega", model.omega}, {"m", model.m}, {"e", model.e}, {"potential", to_json(model.potential)}};
}

ModelConfig model_from_json(const json& j, const std::string& path)
{
    if (!j.is_object()) throw ConfigError("field '" + path + "' must be an object");
    const double omega = number_field(j, "omega", path);
    const double m = optional_number(j, "m", path, 0.0);
    const double e = optional_number(j, "e", path, 0.0);
    if (!j.contains("potential")) throw ConfigError("missing field '" + path + ".potential'");
    Potential v = potential_from_json(j.at("potential"), path + ".potential");
    try {
        return ModelConfig::make(omega, m, e, std::move(v));
    } catch (const std::invalid_argument& err) {
        throw ConfigError("field '" + path + "': " + err.what());
    }
}

std::string model_hash(const ModelConfig& model)
{
    const std::string canonical = to_json(model).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json to_json(const NoGoVerdict& v)
{
    json j{{"status", std::string(to_string(v.status))}, {"condition", v.condition}, {"margin", v.margin}};
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    if (v.counter_witness) j["counter_witness"] = *v.counter_witness;
    if (!v.roots.empty()) j["roots"] = v.roots;
    return j;
}

json to_json(const GeneralVerdict& v)
{
    json per = json::array();
    for (const auto& c : v.per_condition) per.push_back(to_json(c));
    return json{{"aggregate", to_json(v.aggregate)}, {"per_condition", per}};
}

json to_json(const FunctionalSet& f)
{
    return json{{"V1", f.V1}, {"Pi1", f.Pi1}, {"Pi2", f.Pi2}, {"I1", f.I1},
                {"I2", f.I2}, {"V2", f.V2},   {"J", f.J}};
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile)
{
    os << "r,phi,a0\n";
    for (Eigen::Index i = 0; i < profile.size(); ++i) {
        os << format_double(profile.r(i)) << ',' << format_double(profile.phi(i)) << ','
           << format_double(profile.a0(i)) << '\n';
    }
}

RadialProfile read_profile_csv(std::istream& is, const ModelConfig& model)
{
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("profile CSV is empty");
    if (line != "r,phi,a0") throw ConfigError("profile CSV line 1: expected header 'r,phi,a0'");
    std::vector<double> r, phi, a0;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell[3];
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ls, cell[k], ',')) {
                throw ConfigError("profile CSV line " + std::to_string(lineno) + ": expected 3 columns");
            }
            try {
                std::size_t used = 0;
                vals[k] = std::stod(cell[k], &used);
                if (used != cell[k].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError("profile CSV line " + std::to_string(lineno) + ": bad number '" + cell[k] + "'");
            }
        }
        r.push_back(vals[0]);
        phi.push_back(vals[1]);
        a0.push_back(vals[2]);
    }
    RadialProfile p;
    p.r = Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    p.phi = Eigen::Map<Eigen::VectorXd>(phi.data(), static_cast<Eigen::Index>(phi.size()));
    p.a0 = Eigen::Map<Eigen::VectorXd>(a0.data(), static_cast<Eigen::Index>(a0.size()));
    p.model = model;
    try {
        p.validate(5);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("profile CSV: ") + err.what());
    }
    return p;
}

json profile_to_json(const RadialProfile& profile)
{
    return json{{"model", to_json(profile.model)},
                {"model_hash", model_hash(profile.model)},
                {"ode_residual", profile.ode_residual},
                {"r", vector_to_json(profile.r)},
                {"phi", vector_to_json(profile.phi)},
                {"a0", vector_to_json(profile.a0)}};
}

RadialProfile profile_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("profile JSON must be an object");
    RadialProfile p;
    if (!j.contains("model")) throw ConfigError("missing field 'model' in profile JSON");
    p.model = model_from_json(j.at("model"));
    for (const char* key : {"r", "phi", "a0"}) {
        if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "' in profile JSON");
    }
    p.r = vector_from_json(j.at("r"), "r");
    p.phi = vector_from_json(j.at("phi"), "phi");
    p.a0 = vector_from_json(j.at("a0"), "a0");
    p.ode_residual = optional_number(j, "ode_residual", "profile", 0.0);
    try {
        p.validate(5);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("profile JSON: ") + err.what());
    }
    return p;
}

}  // namespace kgm
