#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isotype {

enum ExitCode { kPositive = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

// Runs one command; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isotype
