#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tom::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNumericFailure = 1;
inline constexpr int kUsageError = 2;

/// Runs one subcommand. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tom::cli
