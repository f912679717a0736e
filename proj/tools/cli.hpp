#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ricci::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIntegrator = 2;
inline constexpr int kExitBadInitialData = 3;
inline constexpr int kExitFailed = 4;

/// Runs the command line `args` (args[0] is the program name). Output files
/// named "-" go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ricci::cli
