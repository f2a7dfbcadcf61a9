#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace potentia::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputFormat = 2, kVerificationFailed = 3 };

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace potentia::cli
