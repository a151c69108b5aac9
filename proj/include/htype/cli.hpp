#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace htype {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,  ///< computed a negative answer (not H-type, obstruction, rejected certificate)
  kExitInputError = 2,
  kExitUsage = 64,
};

/// Runs the `htype` command line; `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htype
