#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tariff {

// Exit codes shared by the CLI and the in-process command runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;      // parse or schema violation
inline constexpr int kExitInfeasible = 3;  // incentive condition fails
inline constexpr int kExitMismatch = 4;    // oracle disagreement / internal error

// Runs one subcommand ("solve-cp", "solve-sp", "solve-pp", "design-menu",
// "check-ic", "sweep", "verify") with its flags.  Records go to out (or the
// file named by --out); structured diagnostics go to diag as JSON lines.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& diag);

}  // namespace tariff
