#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tooldc::cli {

/// Exit statuses: 0 success, 1 data or runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tooldc::cli
