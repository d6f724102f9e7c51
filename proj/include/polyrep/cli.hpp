#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyrep {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitNotSimple = 2,
  kExitInputError = 3,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyrep
