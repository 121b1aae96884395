#pragma once

#include <iosfwd>

#include "pfscale/config.hpp"

namespace pfscale {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitInvalid = 2 };

/// Runs one command and writes its JSON/CSV artifacts into cfg.output_dir.
/// Returns kExitOk, or kExitFailed when a check fails or a computation throws.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Command-line front end: subcommand, flags, optional --config file.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pfscale
