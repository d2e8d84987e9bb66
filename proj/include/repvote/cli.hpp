#pragma once

#include <ostream>

namespace repvote {

// Entry point of the `repvote` command. Returns the process exit code:
// 0 success, 2 input error, 3 infeasible target or unresolvable tie,
// 4 instance too large.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace repvote
