#include "kgm/cli.hpp"

#include "kgm/scan.hpp"

#include <fstream>
#include <ostream>

namespace kgm::cli {

namespace {

int exit_code(VerdictStatus s)
{
    switch (s) {
    case VerdictStatus::Excluded: return kExcluded;
    case VerdictStatus::NotExcluded: return kNotExcluded;
    case VerdictStatus::Inconclusive: return kInconclusive;
    }
    return kError;
}

std::filesystem::path prepare_out_dir(const Options& opts)
{
    const std::filesystem::path dir = opts.out_dir.value_or(std::filesystem::path("."));
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
}

json trace_json(const std::vector<BisectionStep>& trace)
{
    json t = json::array();
    for (const auto& s : trace) {
        t.push_back(json{{"phi0", s.phi0},
                         {"outcome", std::string(to_string(s.outcome))},
                         {"nodes", s.nodes},
                         {"r_stop", s.r_stop}});
    }
    return t;
}

}  // namespace

int cmd_check(const Options& opts, std::ostream& out, std::ostream& err)
{
    try {
        Config c = load_config(opts.config);
        if (opts.tol) c.checker.tol = *opts.tol;
        const CheckReport report = run_check(c.model, c.checker);
        out << to_json(report).dump(2) << '\n';
        return exit_code(report.aggregate.status);
    } catch (const std::exception& e) {
        err << "check: " << e.what() << '\n';
        return kError;
    }
}

int cmd_solve(const Options& opts, std::ostream& out, std::ostream& err)
{
    Config c;
    try {
        c = load_config(opts.config);
        if (opts.tol) c.solver.seed.tol = *opts.tol;
    } catch (const std::exception& e) {
        err << "solve: " << e.what() << '\n';
        return kError;
    }
    try {
        const RadialProfile profile = run_solve(c.model, c.solver);
        const auto dir = prepare_out_dir(opts);
        {
            std::ofstream csv(dir / "profile.csv");
            if (!csv) throw ConfigError("cannot write " + (dir / "profile.csv").string());
            write_profile_csv(csv, profile);
        }
        json pj = profile_to_json(profile);
        const json meta = profile_metadata(profile);
        pj["metadata"] = meta;
        write_file(dir / "profile.json", pj.dump() + "\n");
        json summary{{"status", "Converged"}, {"metadata", meta}};
        out << summary.dump(2) << '\n';
        return kOk;
    } catch (const NoSolution& e) {
        out << json{{"status", "NoSolution"}, {"message", e.what()}, {"trace", trace_json(e.trace())}}.dump(2) << '\n';
        return kNoSolution;
    } catch (const NoConvergence& e) {
        out << json{{"status", "NoConvergence"}, {"message", e.what()}, {"residual_trace", e.residual_trace()}}.dump(2)
            << '\n';
        return kNoSolution;
    } catch (const ContinuationBreakdown& e) {
        out << json{{"status", "ContinuationBreakdown"}, {"message", e.what()}, {"e_reached", e.e_reached()}}.dump(2)
            << '\n';
        return kNoSolution;
    } catch (const std::exception& e) {
        err << "solve: " << e.what() << '\n';
        return kError;
    }
}

int cmd_verify(const std::filesystem::path& profile_path, const Options& opts, std::ostream& out, std::ostream& err)
{
    try {
        Config c = load_config(opts.config);
        if (opts.tol) c.verify.tol = *opts.tol;

        RadialProfile profile;
        if (profile_path.extension() == ".json") {
            std::ifstream in(profile_path);
            if (!in) throw ConfigError("cannot open profile '" + profile_path.string() + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error&) {
                throw ConfigError("profile '" + profile_path.string() + "' is not valid JSON");
            }
            profile = profile_from_json(j);
            const std::string expected = model_hash(c.model);
            const std::string stored = j.value("model_hash", model_hash(profile.model));
            if (stored != expected || model_hash(profile.model) != expected) {
                err << "verify: profile model hash " << stored << " does not match config model hash " << expected
                    << '\n';
                return kError;
            }
        } else {
            std::ifstream in(profile_path);
            if (!in) throw ConfigError("cannot open profile '" + profile_path.string() + "'");
            profile = read_profile_csv(in, c.model);
        }

        const VerifyReport report = run_verify(profile, c.verify);
        json j = to_json(report);
        j["model_hash"] = model_hash(c.model);
        if (opts.out_dir) {
            const auto dir = prepare_out_dir(opts);
            write_file(dir / "report.json", j.dump(2) + "\n");
            std::ofstream csv(dir / "scaling_curve.csv");
            csv << "alpha,beta,lambda,S\n";
            for (const auto& s : report.curve) {
                csv << format_double(s.scaling.alpha) << ',' << format_double(s.scaling.beta) << ','
                    << format_double(s.scaling.lambda) << ',' << format_double(s.action) << '\n';
            }
        }
        out << j.dump(2) << '\n';
        return report.pass ? kOk : kVerifyFailed;
    } catch (const std::exception& e) {
        err << "verify: " << e.what() << '\n';
        return kError;
    }
}

int cmd_scan(const Options& opts, std::ostream& out, std::ostream& err)
{
    try {
        Config c = load_config(opts.config);
        if (opts.tol) c.checker.tol = *opts.tol;
        const ScanResult result = run_scan(c, opts.jobs, opts.out_dir);
        out << to_json(result).dump(2) << '\n';
        return kOk;
    } catch (const std::exception& e) {
        err << "scan: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace kgm::cli
