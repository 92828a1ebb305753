#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tailrisk::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumericError = 3,
};

inline constexpr unsigned long long kDefaultSeed = 20111;

// Runs one subcommand. args excludes the program name. Results go to the
// files named by the flags ("-" is `out`); diagnostics go to `err`. Outputs are
// staged and only written once the whole command has succeeded.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tailrisk::cli
