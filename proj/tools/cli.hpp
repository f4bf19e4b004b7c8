#ifndef KWLE_TOOLS_CLI_HPP
#define KWLE_TOOLS_CLI_HPP

#include <ostream>

namespace kwle::cli {

// process exit codes; errors are also emitted as JSON on stdout
enum ExitCode {
    exit_ok = 0,
    exit_other = 1,
    exit_parse = 2,
    exit_support = 3,
    exit_negative_variance = 4,
    exit_quadrature = 5,
    exit_degenerate = 6,
};

/// Parses argv and runs one subcommand, writing results to `out`.
/// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kwle::cli

#endif  // KWLE_TOOLS_CLI_HPP
