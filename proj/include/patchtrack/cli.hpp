#pragma once

#include <iosfwd>

namespace patchtrack {

/// Entry point of the patchtrack command line. Returns the process exit
/// code: 0 success (including --help), 2 bad arguments, 1 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace patchtrack
