#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vigp {

// Exit codes of the command-line front end.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIters = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitVerdictFailed = 4;

/// Runs one CLI invocation. args excludes the program name. The one-line result
/// goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vigp
