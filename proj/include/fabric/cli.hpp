#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fabric {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,      // bad arguments, unknown subject, invalid scenario
  kExitDataset = 3,    // bundle failed to load
  kExitInvariant = 4,  // internal consistency check failed
};

/// Runs the CLI on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fabric
