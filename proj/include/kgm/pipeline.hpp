#ifndef KGM_PIPELINE_HPP
#define KGM_PIPELINE_HPP

#include "kgm/config.hpp"

namespace kgm {

inline constexpr const char* kToolVersion = "0.1.0";

/// Verdict used by the CLI: for PowerLaw potentials the closed-form case
/// table is consulted first and its label reported when it excludes;
/// otherwise the sampled general check decides.
struct CheckReport {
    NoGoVerdict aggregate;
    std::optional<NoGoVerdict> power_law;
    GeneralVerdict general;
};

CheckReport run_check(const ModelConfig& model, const CheckOptions& opts);
json to_json(const CheckReport& report);

/// solve_qball for e = 0, solve_gauged otherwise.
RadialProfile run_solve(const ModelConfig& model, const GaugedOptions& opts);

struct ResidualRow {
    std::string identity;  ///< general | amplitude | power | stationarity
    double alpha = 0.0;
    double beta = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    FunctionalSet functionals;
    double action = 0.0;
    double charge = 0.0;
    std::vector<ResidualRow> rows;
    std::vector<ScalingSample> curve;
    bool pass = true;
    double max_residual = 0.0;  ///< over the general/amplitude/power rows
};

/// The residual table of the scaling identities plus S(lambda) samples.
VerifyReport run_verify(const RadialProfile& profile, const VerifyOptions& opts);
json to_json(const VerifyReport& report);

/// Profile metadata written next to solved profiles.
json profile_metadata(const RadialProfile& profile);

}  // namespace kgm

#endif  // KGM_PIPELINE_HPP
