#pragma once

#include <iosfwd>

namespace akqr {

/// Command-line entry point. Exit codes: 0 success, 1 verification failure
/// or other runtime error, 2 input error, 3 solver non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace akqr
