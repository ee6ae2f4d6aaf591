#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparse_triangle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparse_triangle::cli
