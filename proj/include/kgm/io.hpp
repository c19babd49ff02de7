#ifndef KGM_IO_HPP
#define KGM_IO_HPP

#include "kgm/nogo.hpp"
#include "kgm/profile.hpp"
#include "kgm/virial.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace kgm {

using json = nlohmann::json;

/// Malformed or invalid configuration / input file. The message names the
/// offending field path or the line and column of a syntax error.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "%.17g": shortest fixed width that round-trips every double.
std::string format_double(double value);

json to_json(const Potential& potential);
Potential potential_from_json(const json& j, const std::string& path = "potential");

json to_json(const ModelConfig& model);
ModelConfig model_from_json(const json& j, const std::string& path = "model");

/// FNV-1a 64 of the canonical model JSON, as 16 hex digits.
std::string model_hash(const ModelConfig& model);

json to_json(const NoGoVerdict& verdict);
json to_json(const GeneralVerdict& verdict);
json to_json(const FunctionalSet& f);

/// Columns r, phi, a0 with a header line; 17 significant digits.
void write_profile_csv(std::ostream& os, const RadialProfile& profile);
/// Reads the grid and fields; the model must be supplied separately.
RadialProfile read_profile_csv(std::istream& is, const ModelConfig& model);

json profile_to_json(const RadialProfile& profile);
RadialProfile profile_from_json(const json& j);

}  // namespace kgm

#endif  // KGM_IO_HPP
