#pragma once

#include <iosfwd>

namespace rrambb::cli {

/// Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime failure.
int run_command(int argc, const char* const* argv);

/// Same, with explicit streams for tests.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrambb::cli
