#include "kgm/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace kgm {

CheckReport run_check(const ModelConfig& model, const CheckOptions& opts)
{
    CheckReport report;
    report.general = classify_general(model, opts);
    report.aggregate = report.general.aggregate;
    const Potential& v = model.potential;
    if (v.family() == PotentialFamily::PowerLaw) {
        report.power_law = classify_power_law(v.gamma(), v.p(), model.m2(), model.omega2());
        if (report.power_law->status == VerdictStatus::Excluded) report.aggregate = *report.power_law;
    }
    return report;
}

json to_json(const CheckReport& report)
{
    json j = to_json(report.general);
    j["aggregate"] = to_json(report.aggregate);
    j["power_law"] = report.power_law ? to_json(*report.power_law) : json(nullptr);
    return j;
}

RadialProfile run_solve(const ModelConfig& model, const GaugedOptions& opts)
{
    if (model.e == 0.0) return solve_qball(model, opts.seed);
    return solve_gauged(model, opts);
}

VerifyReport run_verify(const RadialProfile& profile, const VerifyOptions& opts)
{
    const ModelConfig& model = profile.model;
    VerifyReport rep;
    rep.functionals = compute_functionals(profile);
    rep.action = action_from_functionals(rep.functionals, model);
    rep.charge = charge(profile);

    auto add = [&](std::string identity, double alpha, double beta, double residual, double tol) {
        const bool pass = std::isfinite(residual) && residual <= tol;
        rep.rows.push_back({std::move(identity), alpha, beta, residual, tol, pass});
        rep.pass = rep.pass && pass;
        if (rep.rows.back().identity != "stationarity") rep.max_residual = std::max(rep.max_residual, residual);
    };

    for (double a : opts.alphas) add("general", a, 3.0 - 2.0 * a, virial_residual_general(rep.functionals, model, a), opts.tol);
    add("amplitude", 0.0, 0.0, virial_residual_amplitude(rep.functionals, model), opts.tol);
    if (model.potential.family() == PotentialFamily::PowerLaw) {
        for (const auto& [a, b] : opts.scalings) {
            add("power", a, b, virial_residual_power(rep.functionals, model, {a, b, 1.0}), opts.tol);
        }
    }
    const double scale = std::max(std::abs(rep.action), action_scale(rep.functionals, model));
    for (const auto& [a, b] : opts.scalings) {
        const double slope = action_slope(profile, a, b, opts.dlambda);
        add("stationarity", a, b, scale > 0.0 ? std::abs(slope) / scale : std::abs(slope), opts.stationarity_tol);
    }

    std::vector<ScalingParams> samples;
    for (const auto& [a, b] : opts.scalings) {
        for (double l : {0.5, 0.8, 0.9, 0.99, 1.0, 1.01, 1.1, 1.25, 2.0}) samples.push_back({a, b, l});
    }
    rep.curve = scaling_curve(profile, samples);
    return rep;
}

json to_json(const VerifyReport& rep)
{
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(json{{"identity", r.identity},
                            {"alpha", r.alpha},
                            {"beta", r.beta},
                            {"residual", r.residual},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}});
    }
    json curve = json::array();
    for (const auto& s : rep.curve) {
        curve.push_back(json{{"alpha", s.scaling.alpha},
                             {"beta", s.scaling.beta},
                             {"lambda", s.scaling.lambda},
                             {"S", s.action}});
    }
    return json{{"functionals", to_json(rep.functionals)},
                {"action", rep.action},
                {"charge", rep.charge},
                {"residuals", rows},
                {"scaling_curve", curve},
                {"max_residual", rep.max_residual},
                {"pass", rep.pass}};
}

json profile_metadata(const RadialProfile& profile)
{
    json j{{"model", to_json(profile.model)},
           {"model_hash", model_hash(profile.model)},
           {"grid_size", profile.size()},
           {"R_max", profile.r_max()},
           {"phi0", profile.phi(0)},
           {"nodes", count_nodes(profile.phi)},
           {"ode_residual", profile.ode_residual},
           {"charge", charge(profile)}};
    if (profile.model.e > 0.0) {
        j["a0_center"] = profile.a0(0);
        j["coulomb_tail_spread"] = coulomb_tail_spread(profile);
        j["coulomb_charge"] = profile.a0(profile.size() - 1) * profile.r_max();
    }
    return j;
}

}  // namespace kgm
