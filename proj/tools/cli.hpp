#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankone::cli {

enum ExitCode : int { kAllPassed = 0, kVerificationFailed = 1, kUsageError = 2, kNumericalError = 3 };

/// Runs one command line (args[0] is the program name) against the given
/// streams and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankone::cli
