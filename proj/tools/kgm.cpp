// kgm: no-go checks, soliton profiles and scaling-identity verification for
// the Klein-Gordon-Maxwell standing-wave problem.

#include "kgm/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Klein-Gordon-Maxwell soliton toolkit: check | solve | verify | scan"};
    app.require_subcommand(1);

    kgm::cli::Options opts;
    std::string config;
    std::string out_dir;
    double tol = 0.0;
    std::string profile;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "configuration JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--tol", tol, "tolerance override")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* check = app.add_subcommand("check", "classify the configured model (exit 0/2/3 = NotExcluded/Excluded/Inconclusive)");
    auto* solve = app.add_subcommand("solve", "compute a radial profile (exit 4 when none is found)");
    auto* verify = app.add_subcommand("verify", "evaluate the scaling identities on a stored profile");
    auto* scan = app.add_subcommand("scan", "sweep up to two parameters");
    for (auto* sub : {check, solve, verify, scan}) add_common(sub);
    verify->add_option("--profile,profile", profile, "profile JSON or CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kgm::cli::kError;
    }

    opts.config = config;
    if (!out_dir.empty()) opts.out_dir = out_dir;
    if (tol > 0.0) opts.tol = tol;

    if (check->parsed()) return kgm::cli::cmd_check(opts, std::cout, std::cerr);
    if (solve->parsed()) return kgm::cli::cmd_solve(opts, std::cout, std::cerr);
    if (verify->parsed()) return kgm::cli::cmd_verify(profile, opts, std::cout, std::cerr);
    return kgm::cli::cmd_scan(opts, std::cout, std::cerr);
}
