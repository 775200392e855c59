#pragma once

#include <iosfwd>

namespace scottlab::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kUsageError = 2,
  kResourceError = 3,
};

// Runs one subcommand. JSON goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scottlab::cli
