#pragma once

// The qcsp command line: classify, eval, reduce, poly, surject, survey.

#include <iosfwd>
#include <string>
#include <vector>

namespace qcsp::cli {

enum ExitCode { exit_ok = 0, exit_negative = 1, exit_usage = 2, exit_exhausted = 3 };

/// `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace qcsp::cli
