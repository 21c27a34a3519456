#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wetting {

/// Exit codes of the experiment runner.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerification = 2 };

/// Command-line entry point; `args` excludes the program name.
int run_lab(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wetting
