#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betarep::cli {

enum ExitCode : int { Success = 0, Negative = 1, Inconclusive = 2, Usage = 3 };

/// Runs one command line (without the program name); output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace betarep::cli
