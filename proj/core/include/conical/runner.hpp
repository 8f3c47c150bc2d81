#pragma once

#include <string>

namespace conical {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitDivergence = 4;

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
    /// When positive, rerun the command on `refine` doubled grids and emit
    /// an order-of-convergence table instead of a single result.
    int refine = 0;
    /// Must match the config's "command" field when non-empty.
    std::string expected_command;
};

/// Executes the command described by the JSON config and writes the outputs
/// into out_dir.  Returns the process exit code; error text goes to stderr.
int run_command(const RunOptions& options);

} // namespace conical
