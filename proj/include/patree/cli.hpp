#pragma once

#include <iosfwd>

namespace patree {

/// Exit statuses of the command-line frontend.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumeric = 2,
  kExitIo = 3,
};

/// Runs one subcommand (malthus, degdist, treedist, simulate, compare, theta).
/// Results go to `out` unless --out names a file prefix; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patree
