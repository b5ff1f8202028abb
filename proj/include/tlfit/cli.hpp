#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tlfit {

/// Runs the command line `args` (args[0] is the program name). Reports and
/// data go to `out`, diagnostics to `err`.
///
/// Exit codes: 0 success, 1 input or domain error, 2 fit did not converge.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlfit
