#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cbnet {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitFileError = 1,
    kExitUsage = 2,
    kExitInternal = 3,
};

/// Runs one `cbnet` invocation. `args` excludes the program name. Normal
/// output goes to `out`, the one-line diagnostic on failure to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbnet
