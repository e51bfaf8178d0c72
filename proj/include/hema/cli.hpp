#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hema::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, failed = 1, input_error = 2 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hema::cli
