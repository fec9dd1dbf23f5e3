#pragma once

#include <ostream>

namespace dyncon {

/// Entry point of the command-line tool; returns the process exit code
/// (0 success, 1 checker failure or I/O error, 2 usage, parse or infeasible).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dyncon
