// cli.hpp: the `cavres` command-line front end as a library, so tests can
// drive it without spawning processes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cavres::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Parses `args` (without the program name) and runs one subcommand.
/// Normal output goes to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Known figure ids, in presentation order.
const std::vector<std::string>& figure_ids();

}  // namespace cavres::cli
