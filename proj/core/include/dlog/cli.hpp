#pragma once

#include <iosfwd>

namespace dlog {

// Full command-line frontend (solve, sweep, analyze, plot, selftest).
// Exit codes: 0 success, 1 solve failure or failed selftest, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dlog
