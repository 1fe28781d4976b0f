#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace molqudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // computation or verification failed
inline constexpr int kExitUsage = 2;    // bad arguments, config or input files

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace molqudit::cli
