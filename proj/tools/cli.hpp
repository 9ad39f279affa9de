#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epsdiag::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFactsInconsistent = 2,
  kParse = 3,
  /// random-check found a property violation.
  kPropertyFailure = 4,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epsdiag::cli
