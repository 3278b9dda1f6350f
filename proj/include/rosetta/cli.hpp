#pragma once

#include <iosfwd>

namespace rosetta {

// Entry point of the `rosetta` command. Returns the process exit code:
// 0 success, 1 invalid input or validation errors, 2 usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rosetta
