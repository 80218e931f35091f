#pragma once

#include "udr/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace udr {

enum ExitCode : int {
    ExitOk = 0,
    ExitUsage = 2,
    ExitPrecision = 3,
    ExitViolation = 4,
};

int exit_code_for(ErrorCode code);

/// Runs the command line `args` (without the program name). Reports go to
/// `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace udr
