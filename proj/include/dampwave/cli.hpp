#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dampwave::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,       // I/O and other unexpected errors
    kUsage = 2,
    kNumerical = 3,     // singular system
    kDiverged = 4,      // a requested solve blew up
};

/// Runs one subcommand (solve, compare, stability, convergence, table1,
/// table2, figures). `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dampwave::cli
