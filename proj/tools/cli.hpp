#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace css::cli {

enum ExitCode { kOk = 0, kNegative = 1, kUsage = 2, kIo = 3 };

/// Runs one `css` invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace css::cli
