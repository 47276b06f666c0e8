#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lipfree {

enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitParse = 2, kExitInfeasible = 3 };

// Runs the command line (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lipfree
