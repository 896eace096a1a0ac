#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sysid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

// Runs the command line `args` (without the program name). Everything the
// command prints goes to `out`/`err`; files named by flags are written
// directly. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sysid::cli
