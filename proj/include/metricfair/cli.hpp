#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace metricfair::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kUsageError = 2, kSuiteFailure = 3 };

/// Runs the command line `args` (without the program name). Output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metricfair::cli
