#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polynormal::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to `out`, diagnostics to `err`. Returns the process exit code: 0 on
/// success, 2 on invalid input, 3 on an invariant violation, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polynormal::cli
