#pragma once

#include <ostream>

namespace glmtest {

// Exit codes of the glmtest command.
enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

// Parses argv and runs the fit, test or simulate subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glmtest
