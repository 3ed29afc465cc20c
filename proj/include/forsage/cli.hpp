#pragma once

#include <ostream>
#include <span>
#include <string>

namespace forsage::cli {

enum ExitCode : int {
    kOk = 0,
    kBadArguments = 2,
    kIoFailure = 3,
    kReplayFailure = 4,
};

/// Runs one `forsage` subcommand (simulate, replay, analyze, visualize).
/// `args` excludes the program name. Errors are reported on `err` as a
/// single line: `error code=<code> [ordinal=<n>] message="<text>"`.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace forsage::cli
