// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "kgm/nogo.hpp"
#include "kgm/pipeline.hpp"
#include "kgm/solver.hpp"
#include "kgm/virial.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace kgm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

ModelConfig quartic(double w2, double e = 0.0)
{
    return ModelConfig::make(std::sqrt(w2), 0.0, e, Potential::quartic(1.0, 1.0));
}

double identity_residual(const RadialProfile& p)
{
    const FunctionalSet f = compute_functionals(p);
    double worst = virial_residual_amplitude(f, p.model);
    for (double a : {0.0, 0.5, 1.0, 1.5}) worst = std::max(worst, virial_residual_general(f, p.model, a));
    return worst;
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// 1
Outcome gaussian_oracle()
{
    const auto t0 = Clock::now();
    QBallOptions opts;
    opts.grid_size = 4096;
    const auto model = ModelConfig::make(1.0, 0.0, 0.0, Potential::logarithmic(1.0, 1.0));
    const RadialProfile p = solve_qball(model, opts);
    const double elapsed = seconds_since(t0);
    const oracle::Gaussian g;
    double err = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) err = std::max(err, std::abs(p.phi(i) - g.phi(p.r(i))));
    err /= g.amplitude();
    return {err <= 1e-6 && elapsed < 5.0 && p.size() <= 4096,
            "Linf rel err " + fmt(err) + " on " + std::to_string(p.size()) + " points in " + fmt(elapsed) + " s"};
}

// 2
Outcome virial_suite()
{
    std::ostringstream d;
    bool ok = true;

    double analytic = 0.0;
    for (const oracle::Gaussian g : {oracle::Gaussian{}, oracle::Gaussian{1.0, 0.5, 0.7}, oracle::Gaussian{2.0, 1.5, 1.2}}) {
        FunctionalSet f;
        f.V1 = g.V1();
        f.Pi1 = g.Pi1();
        f.V2 = g.V2();
        f.J = g.J();
        const auto model = ModelConfig::make(g.omega, 0.0, 0.0, Potential::logarithmic(g.mu2, g.g));
        analytic = std::max(analytic, virial_residual_amplitude(f, model));
        for (double a : {0.0, 0.5, 1.0, 1.5}) analytic = std::max(analytic, virial_residual_general(f, model, a));
    }
    ok = ok && analytic < 1e-8;
    d << "analytic " << fmt(analytic);

    for (double e : {0.0, 0.1}) {
        GaugedOptions coarse;
        GaugedOptions fine;
        fine.seed.grid_size = 2 * coarse.seed.grid_size - 1;
        const auto model = quartic(0.5, e);
        const RadialProfile pc = e == 0.0 ? solve_qball(model, coarse.seed) : solve_gauged(model, coarse);
        const RadialProfile pf = e == 0.0 ? solve_qball(model, fine.seed) : solve_gauged(model, fine);
        const double rc = identity_residual(pc);
        const double rf = identity_residual(pf);
        ok = ok && rc < 1e-4 && rc / rf >= 3.5;
        d << (e == 0.0 ? "; quartic " : "; gauged ") << fmt(rc) << " -> " << fmt(rf) << " (x" << fmt(rc / rf) << ")";
    }
    return {ok, d.str()};
}

// 3
Outcome power_law_table()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    std::vector<int> seen(6, 0);
    const std::vector<std::string> labels{"", "gamma=0", "gamma>0,p>=2", "gamma>0,1<p<2,m2>=omega2", "gamma<0,1<p<=2",
                                          "gamma<0,p>=6,m2>=omega2>0"};
    for (int k = 0; k < 200; ++k) {
        const double gamma = k % 10 == 0 ? 0.0 : (u(rng) < 0.5 ? -1.0 : 1.0) * (0.01 + 3.0 * u(rng));
        const double pick = u(rng);
        const double p = pick < 0.1 ? 2.0 : pick < 0.2 ? 6.0 : 1.0 + 1e-6 + 8.0 * u(rng);
        const double m2 = 3.0 * u(rng);
        const double w2 = u(rng) < 0.1 ? m2 : u(rng) < 0.1 ? 0.0 : 3.0 * u(rng);
        const NoGoVerdict v = classify_power_law(gamma, p, m2, w2);
        const std::string truth = oracle::power_law_case(gamma, p, m2, w2);
        const bool match = truth.empty() ? v.status == VerdictStatus::NotExcluded
                                         : v.status == VerdictStatus::Excluded && v.condition == truth;
        agree += match;
        for (std::size_t c = 0; c < labels.size(); ++c) seen[c] += truth == labels[c];
    }
    const double elapsed = seconds_since(t0);
    bool all_cases = true;
    for (int s : seen) all_cases = all_cases && s > 0;
    return {agree == 200 && all_cases && elapsed < 1.0,
            std::to_string(agree) + "/200 agree, all five cases sampled: " + (all_cases ? "yes" : "no") + ", " +
                fmt(elapsed) + " s"};
}

// 4
Outcome subsumption()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int excluded = 0;
    int counterexamples = 0;
    for (int k = 0; k < 500; ++k) {
        const double gamma = k % 12 == 0 ? 0.0 : 4.0 * u(rng) - 2.0;
        const double pick = u(rng);
        const double p = pick < 0.1 ? 2.0 : pick < 0.2 ? 6.0 : 1.0 + 1e-6 + 8.0 * u(rng);
        const double m = 2.0 * u(rng);
        const double w = u(rng) < 0.1 ? m : 2.0 * u(rng);
        const double e = 0.01 + u(rng);
        if (classify_power_law(gamma, p, m * m, w * w).status != VerdictStatus::Excluded) continue;
        ++excluded;
        const auto model = ModelConfig::make(w, m, e, Potential::power_law(gamma, p));
        if (classify_general(model).aggregate.status != VerdictStatus::Excluded) ++counterexamples;
    }
    return {counterexamples == 0 && excluded > 0,
            std::to_string(counterexamples) + " counterexamples among " + std::to_string(excluded) +
                " power-law-excluded samples of 500"};
}

ModelConfig random_model(std::mt19937_64& rng, int k)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double w = 1.5 * u(rng);
    const double m = k % 3 == 0 ? 0.0 : 1.5 * u(rng);
    const double e = k % 2 == 0 ? 0.0 : 0.3 * u(rng);
    switch (k % 4) {
    case 0: return ModelConfig::make(w, m, e, Potential::power_law(4.0 * u(rng) - 2.0, 1.2 + 6.0 * u(rng)));
    case 1: return ModelConfig::make(w, m, e, Potential::quartic(2.0 * u(rng), 0.2 + u(rng)));
    case 2: return ModelConfig::make(w, m, e, Potential::logarithmic(2.0 * u(rng), 2.0 * u(rng) - 1.0));
    default:
        return ModelConfig::make(w, m, e,
                                 Potential::polynomial({{2, 2.0 * u(rng) - 1.0}, {4, 2.0 * u(rng) - 1.0}, {6, u(rng)}}));
    }
}

GaugedOptions options_for(const ModelConfig& model)
{
    GaugedOptions o;
    try {
        (void)default_r_max(model);
    } catch (const std::invalid_argument&) {
        o.seed.r_max = 40.0;
    }
    return o;
}

// 5
Outcome classifier_solver_consistency()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4242);
    int excluded = 0;
    int consistent = 0;
    std::string first_bad;
    for (int k = 0; excluded < 50 && k < 5000; ++k) {
        const ModelConfig model = random_model(rng, k);
        if (run_check(model, CheckOptions{}).aggregate.status != VerdictStatus::Excluded) continue;
        ++excluded;
        try {
            const RadialProfile p = run_solve(model, options_for(model));
            if (p.phi.isZero(0.0)) {
                ++consistent;
            } else if (first_bad.empty()) {
                first_bad = to_json(model).dump();
            }
        } catch (const NoSolution&) {
            ++consistent;
        } catch (const NoConvergence&) {
            ++consistent;
        } catch (const ContinuationBreakdown&) {
            ++consistent;
        }
    }

    int converged = 0;
    const std::vector<ModelConfig> admissible{
        ModelConfig::make(1.0, 0.0, 0.0, Potential::logarithmic(1.0, 1.0)),
        ModelConfig::make(0.7, 0.0, 0.0, Potential::logarithmic(1.0, 0.5)),
        ModelConfig::make(1.2, 0.0, 0.0, Potential::logarithmic(0.5, 2.0)),
        quartic(0.5),
        quartic(0.7),
        quartic(0.9),
        quartic(0.5, 0.1)};
    for (const auto& model : admissible) {
        if (run_check(model, CheckOptions{}).aggregate.status == VerdictStatus::Excluded) continue;
        try {
            const RadialProfile p = run_solve(model, options_for(model));
            converged += p.phi(0) > 0.0 && count_nodes(p.phi) == 0;
        } catch (const std::exception&) {
        }
    }
    const double elapsed = seconds_since(t0);
    std::string d = std::to_string(consistent) + "/" + std::to_string(excluded) +
                    " excluded configurations without a nontrivial profile; " + std::to_string(converged) + "/" +
                    std::to_string(admissible.size()) + " admissible configurations converged; " + fmt(elapsed) + " s";
    if (!first_bad.empty()) d += "; first inconsistency " + first_bad;
    return {excluded == 50 && consistent == 50 && converged == static_cast<int>(admissible.size()) && elapsed < 600.0,
            d};
}

// 6
Outcome stationarity()
{
    const std::vector<std::pair<double, double>> pairs{{1.5, 0.0}, {0.5, 2.0}, {0.0, 3.0}};
    auto relative_slopes = [&](const RadialProfile& p) {
        const FunctionalSet f = compute_functionals(p);
        const double scale = std::max(std::abs(action_from_functionals(f, p.model)), action_scale(f, p.model));
        std::vector<double> out;
        for (auto [a, b] : pairs) out.push_back(std::abs(action_slope(p, a, b)) / scale);
        return out;
    };

    const std::vector<RadialProfile> solutions{
        solve_qball(ModelConfig::make(1.0, 0.0, 0.0, Potential::logarithmic(1.0, 1.0))), solve_qball(quartic(0.5)),
        solve_qball(ModelConfig::make(std::sqrt(0.5), 1.0, 0.0, Potential::power_law(-1.0, 4.0))),
        solve_gauged(quartic(0.5, 0.1))};
    double worst = 0.0;
    for (const auto& p : solutions) {
        for (double s : relative_slopes(p)) worst = std::max(worst, s);
    }

    RadialProfile wrong = solutions[1];
    for (Eigen::Index i = 0; i < wrong.size(); ++i) wrong.phi(i) = 2.0 * std::exp(-wrong.r(i) * wrong.r(i));
    double perturbed = 0.0;
    for (double s : relative_slopes(wrong)) perturbed = std::max(perturbed, s);

    return {worst < 1e-3 && perturbed > 1e-1,
            "max solution slope " + fmt(worst) + " (4 profiles x 3 scalings); perturbed profile " + fmt(perturbed)};
}

// 7
Outcome closed_form_action()
{
    const RadialProfile p = solve_qball(ModelConfig::make(std::sqrt(0.5), 1.0, 0.0, Potential::power_law(-1.0, 4.0)));
    const FunctionalSet f = compute_functionals(p);
    const double w2m2 = p.model.omega2() - p.model.m2();
    double worst = 0.0;
    for (auto [a, b] : {std::pair{1.5, 0.0}, {0.5, 2.0}, {0.0, 3.0}, {1.0, 1.0}}) {
        std::vector<ScalingParams> ss;
        for (double l : {0.5, 0.8, 1.25, 2.0}) ss.push_back({a, b, l});
        for (const auto& s : scaling_curve(p, ss)) {
            const double closed =
                oracle::power_law_action(f.Pi1, f.Pi2, f.V1, f.I1, f.I2, f.V2, w2m2, 4.0, a, b, s.scaling.lambda);
            worst = std::max(worst, std::abs(s.action - closed) / std::abs(closed));
        }
    }
    return {worst <= 1e-6, "max relative difference " + fmt(worst) + " over 4 scalings x 4 lambdas"};
}

// 8
Outcome validation_claims()
{
    std::ostringstream d;
    bool ok = true;
    for (const auto& model : {quartic(0.5), ModelConfig::make(1.0, 0.0, 0.0, Potential::logarithmic(1.0, 1.0))}) {
        (void)solve_qball(model);
        const GeneralVerdict v = classify_general(model, {{1e-3, 1e3}});
        int violated = 0;
        for (const auto& c : v.per_condition) violated += c.status == VerdictStatus::NotExcluded;
        ok = ok && violated == static_cast<int>(v.per_condition.size()) && v.aggregate.status == VerdictStatus::NotExcluded;
        d << to_string(model.potential.family()) << " " << violated << "/" << v.per_condition.size() << " violated; ";
    }
    const auto degenerate = coleman_indicator(Potential::polynomial({{2, 1.0}, {4, -2.0}, {6, 1.0}}), 0.01, 10.0, 256);
    bool none = true;
    for (const Potential& v : {Potential::power_law(1.0, 4.0), Potential::power_law(-1.0, 3.0), Potential::quartic(1.0, 1.0),
                               Potential::quartic(0.5, 2.0)}) {
        none = none && !coleman_indicator(v, 0.01, 10.0, 256).attained_interior;
    }
    ok = ok && degenerate.attained_interior && std::abs(degenerate.min_location - 1.0) < 1e-6 && none;
    d << "degenerate vacuum interior minimum at " << fmt(degenerate.min_location) << "; power-law/quartic interior: "
      << (none ? "none" : "found");
    return {ok, d.str()};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 Gaussian oracle", gaussian_oracle},
        {"2 virial identity suite", virial_suite},
        {"3 power-law case table", power_law_table},
        {"4 subsumption", subsumption},
        {"5 classifier-solver consistency", classifier_solver_consistency},
        {"6 stationarity oracle", stationarity},
        {"7 closed-form vs direct action", closed_form_action},
        {"8 validation claims", validation_claims},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
