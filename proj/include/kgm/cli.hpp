#ifndef KGM_CLI_HPP
#define KGM_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace kgm::cli {

/// Process exit codes. Stable contract.
enum ExitCode : int {
    kNotExcluded = 0,
    kOk = 0,
    kError = 1,
    kExcluded = 2,
    kInconclusive = 3,
    kNoSolution = 4,
    kVerifyFailed = 5,
};

struct Options {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> tol;
    int jobs = 1;
};

int cmd_check(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& profile, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_scan(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace kgm::cli

#endif  // KGM_CLI_HPP
