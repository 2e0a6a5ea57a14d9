#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssent {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitBadInput = 2,
  kExitResourceGuard = 3,
  kExitIo = 4,
};

/// Runs the `ssent` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssent
