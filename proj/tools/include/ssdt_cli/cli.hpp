#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssdt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitDomain = 4;

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out` unless --out names a file; diagnostics and, without --out, the run
/// manifest go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssdt::cli
