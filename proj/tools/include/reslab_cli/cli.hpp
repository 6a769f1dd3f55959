#pragma once

#include <ostream>

namespace reslab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      // I/O and anything unexpected
  kConfigError = 2,
  kNumericalFailure = 3,
  kUsage = 64,
};

/// Parses argv, runs one subcommand, returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reslab::cli
