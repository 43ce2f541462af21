#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dialseg::cli {

/// Runs one CLI invocation (args exclude the program name).
/// Exit status: 0 success, 1 usage error, 2 data/validation error,
/// 3 training failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dialseg::cli
