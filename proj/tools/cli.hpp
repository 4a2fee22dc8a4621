#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causal::cli {

/// Exit statuses shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal::cli
