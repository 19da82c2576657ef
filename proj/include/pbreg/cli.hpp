#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbreg {

// Command-line entry point, callable in-process for tests. args excludes the program
// name and is in natural (left-to-right) order. Returns the process exit code:
// 0 success, 2 validation/usage, 3 convergence, 4 I/O.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pbreg
