#pragma once

#include <iosfwd>

namespace windadm::io {

// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;

// Subcommands: assess, check, risk, scuc, validate. Machine-readable results
// go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace windadm::io
