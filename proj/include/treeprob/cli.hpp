#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace treeprob::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, dispatches one subcommand and writes its result to out (or to
/// --output). Diagnostics go to err. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeprob::cli
