#include "kgm/cli.hpp"
#include "kgm/config.hpp"
#include "kgm/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace kgm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("kgm_cli_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write(const fs::path& dir, const std::string& name, const std::string& text)
{
    std::ofstream(dir / name) << text;
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <typename F>
Run run(F&& f)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = f(out, err);
    return {code, out.str(), err.str()};
}

const char* kLog = R"({"model": {"omega": 1, "potential": {"family": "Logarithmic", "mu2": 1, "g": 1}}})";

}  // namespace

TEST_CASE("check exit codes")
{
    TempDir t("check");
    cli::Options o;

    o.config = write(t.path, "free.json", R"({"model": {"omega": 2, "m": 1, "potential": {"family": "PowerLaw", "gamma": 0, "p": 3}}})");
    auto r = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(r.code == cli::kExcluded);
    CHECK(json::parse(r.out).at("aggregate").at("condition") == "gamma=0");

    o.config = write(t.path, "log.json", kLog);
    r = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(r.code == cli::kNotExcluded);
    CHECK(json::parse(r.out).at("aggregate").at("status") == "NotExcluded");

    o.config = write(t.path, "nomega.json", R"({"model": {"potential": {"family": "Quartic", "mu2": 1, "g": 1}}})");
    r = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(r.code == cli::kError);
    CHECK(r.err.find("model.omega") != std::string::npos);

    o.config = write(t.path, "band.json",
                     R"({"model": {"omega": 2, "e": 0.2, "potential": {"family": "Polynomial", "coeffs": [[2, 1], [4, -1e-10]]}},
                         "checker": {"phi_range": [0, 1]}})");
    r = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(r.code == cli::kInconclusive);
    o.tol = 1e-12;
    r = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(r.code == cli::kNotExcluded);
}

TEST_CASE("solve writes profiles and reports failures")
{
    TempDir t("solve");
    cli::Options o;
    o.config = write(t.path, "log.json", kLog);
    o.out_dir = t.path / "log";
    auto r = run([&](auto& out, auto& err) { return cli::cmd_solve(o, out, err); });
    REQUIRE(r.code == cli::kOk);
    CHECK(fs::exists(t.path / "log" / "profile.csv"));
    const json pj = json::parse(slurp(t.path / "log" / "profile.json"));
    CHECK(pj.at("phi").at(0).get<double>() == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
    CHECK(pj.at("metadata").at("nodes") == 0);

    o.config = write(t.path, "excluded.json",
                     R"({"model": {"omega": 0.7071067811865476, "m": 1, "potential": {"family": "PowerLaw", "gamma": 1, "p": 4}}})");
    o.out_dir = t.path / "excluded";
    r = run([&](auto& out, auto& err) { return cli::cmd_solve(o, out, err); });
    CHECK(r.code == cli::kNoSolution);
    const json ex = json::parse(r.out);
    CHECK(ex.at("status") == "NoSolution");
    CHECK(ex.at("trace").size() >= 2);
    CHECK_FALSE(fs::exists(t.path / "excluded" / "profile.csv"));

    o.config = write(t.path, "gauged.json",
                     R"({"model": {"omega": 0.7071067811865476, "e": 0.1, "potential": {"family": "Quartic", "mu2": 1, "g": 1}}})");
    o.out_dir = t.path / "gauged";
    r = run([&](auto& out, auto& err) { return cli::cmd_solve(o, out, err); });
    REQUIRE(r.code == cli::kOk);
    const json meta = json::parse(r.out).at("metadata");
    CHECK(meta.at("coulomb_tail_spread").get<double>() < 1e-6);
    CHECK(meta.at("coulomb_charge").get<double>() > 0.0);
}

TEST_CASE("verify reports residuals and checks the model hash")
{
    TempDir t("verify");
    cli::Options o;
    o.config = write(t.path, "log.json", kLog);
    o.out_dir = t.path;
    REQUIRE(run([&](auto& out, auto& err) { return cli::cmd_solve(o, out, err); }).code == cli::kOk);

    o.out_dir = t.path / "report";
    auto r = run([&](auto& out, auto& err) { return cli::cmd_verify(t.path / "profile.json", o, out, err); });
    CHECK(r.code == cli::kOk);
    const json rep = json::parse(r.out);
    for (const auto& row : rep.at("residuals")) {
        if (row.at("identity") != "stationarity") CHECK(row.at("residual").get<double>() < 1e-8);
    }
    CHECK(fs::exists(t.path / "report" / "report.json"));
    CHECK(slurp(t.path / "report" / "scaling_curve.csv").rfind("alpha,beta,lambda,S\n", 0) == 0);

    r = run([&](auto& out, auto& err) { return cli::cmd_verify(t.path / "profile.csv", o, out, err); });
    CHECK(r.code == cli::kOk);

    cli::Options other = o;
    other.config = write(t.path, "other.json",
                         R"({"model": {"omega": 0.9, "potential": {"family": "Logarithmic", "mu2": 1, "g": 1}}})");
    r = run([&](auto& out, auto& err) { return cli::cmd_verify(t.path / "profile.json", other, out, err); });
    CHECK(r.code == cli::kError);
    CHECK(r.err.find("hash") != std::string::npos);

    // The stored Gaussian is not a solution once omega changes, so the CSV path (no hash) fails the identities.
    r = run([&](auto& out, auto& err) { return cli::cmd_verify(t.path / "profile.csv", other, out, err); });
    CHECK(r.code == cli::kVerifyFailed);
}

TEST_CASE("scan across the power-law case boundaries")
{
    TempDir t("pscan");
    cli::Options o;
    o.config = write(t.path, "scan.json", R"({
      "model": {"omega": 0.5, "m": 1, "potential": {"family": "PowerLaw", "gamma": -1, "p": 4}},
      "scan": {"axes": [{"name": "p", "min": 1.1, "max": 7.0, "steps": 60}], "operations": ["classify"]}})");
    o.out_dir = t.path / "out";
    o.jobs = 3;
    const auto r = run([&](auto& out, auto& err) { return cli::cmd_scan(o, out, err); });
    REQUIRE(r.code == cli::kOk);
    const json res = json::parse(slurp(t.path / "out" / "scan.json"));
    const auto& recs = res.at("records");
    REQUIRE(recs.size() == 60);
    int flips = 0;
    std::string prev;
    for (const auto& rec : recs) {
        const double p = rec.at("parameters").at("p").get<double>();
        const std::string status = rec.at("verdict").at("status").get<std::string>();
        const bool inside = p > 2.0 && p < 6.0;
        CHECK(status == (inside ? "NotExcluded" : "Excluded"));
        if (!prev.empty() && status != prev) ++flips;
        prev = status;
    }
    CHECK(flips == 2);
    CHECK(res.at("provenance").at("tool_version") == "0.1.0");
}

TEST_CASE("single-point scan matches check and solve")
{
    TempDir t("point");
    cli::Options o;
    o.config = write(t.path, "point.json", R"({
      "model": {"omega": 0.7071067811865476, "potential": {"family": "Quartic", "mu2": 1, "g": 1}},
      "scan": {"axes": [], "operations": ["classify", "solve"]}})");
    const auto s = run([&](auto& out, auto& err) { return cli::cmd_scan(o, out, err); });
    REQUIRE(s.code == cli::kOk);
    const json rec = json::parse(s.out).at("records").at(0);

    const auto c = run([&](auto& out, auto& err) { return cli::cmd_check(o, out, err); });
    CHECK(json::parse(c.out).at("aggregate") == rec.at("verdict"));

    o.out_dir = t.path / "solve";
    const auto v = run([&](auto& out, auto& err) { return cli::cmd_solve(o, out, err); });
    REQUIRE(v.code == cli::kOk);
    CHECK(json::parse(v.out).at("metadata").at("phi0") == rec.at("phi0"));
    CHECK(rec.at("solved") == true);
}

TEST_CASE("two-parameter logarithmic scan reproduces the Gaussian amplitude")
{
    TempDir t("logscan");
    cli::Options o;
    o.config = write(t.path, "scan.json", R"({
      "model": {"omega": 1, "potential": {"family": "Logarithmic", "mu2": 1, "g": 1}},
      "scan": {"axes": [{"name": "omega", "min": 0.6, "max": 1.4, "steps": 3},
                        {"name": "g", "min": 0.5, "max": 2.0, "steps": 3}],
               "operations": ["classify", "solve", "verify"]}})");
    o.out_dir = t.path / "a";
    const auto r = run([&](auto& out, auto& err) { return cli::cmd_scan(o, out, err); });
    REQUIRE(r.code == cli::kOk);
    const json res = json::parse(r.out);
    REQUIRE(res.at("records").size() == 9);
    for (const auto& rec : res.at("records")) {
        const double w = rec.at("parameters").at("omega").get<double>();
        const double g = rec.at("parameters").at("g").get<double>();
        REQUIRE(rec.at("solved") == true);
        const double expected = std::exp((1.0 - w * w + 2.0 * g) / (2.0 * g));
        CHECK(rec.at("phi0").get<double>() == doctest::Approx(expected).epsilon(1e-5));
        CHECK(rec.at("verified") == true);
    }

    const std::string csv = slurp(t.path / "a" / "scan.csv");
    CHECK(csv.rfind("index,omega,g,status,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

    cli::Options parallel = o;
    parallel.out_dir = t.path / "b";
    parallel.jobs = 4;
    REQUIRE(run([&](auto& out, auto& err) { return cli::cmd_scan(parallel, out, err); }).code == cli::kOk);
    CHECK(slurp(t.path / "b" / "scan.csv") == csv);
    CHECK(slurp(t.path / "b" / "scan.json") == slurp(t.path / "a" / "scan.json"));
}

TEST_CASE("scan records per-point failures without aborting")
{
    TempDir t("fail");
    cli::Options o;
    o.config = write(t.path, "scan.json", R"({
      "model": {"omega": 0.7071067811865476, "m": 1, "potential": {"family": "PowerLaw", "gamma": 1, "p": 4}},
      "scan": {"axes": [{"name": "gamma", "min": -1, "max": 1, "steps": 2}], "operations": ["classify", "solve"]}})");
    const auto r = run([&](auto& out, auto& err) { return cli::cmd_scan(o, out, err); });
    REQUIRE(r.code == cli::kOk);
    const json recs = json::parse(r.out).at("records");
    REQUIRE(recs.size() == 2);
    CHECK(recs.at(0).at("solved") == true);
    CHECK(recs.at(1).at("solved") == false);
    CHECK(recs.at(1).at("error").get<std::string>().find("solve") != std::string::npos);
}
