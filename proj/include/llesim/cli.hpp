#pragma once

#include <string>
#include <vector>

namespace llesim::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kConfigError = 2,
    kDispersionError = 3,
    kStepCollapse = 4,
    kNoConvergence = 5,
    kIndexOutOfRange = 6,
};

/// Run the command-line tool. argv excludes the program name.
/// Subcommands: analyze, solve, steady, export. Data and result paths go to
/// stdout; progress and diagnostics go to stderr.
int run(const std::vector<std::string>& argv);

} // namespace llesim::cli
