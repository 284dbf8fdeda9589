#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace langcomp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name, e.g.
/// {"simulate", "--fixture", "singapore-whole", "--out", "traj.csv"}.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace langcomp::cli
