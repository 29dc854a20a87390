#pragma once

#include "bclab/errors.hpp"

#include <iosfwd>

namespace bclab {

// 0 ok; 1 internal; 2 syntax/usage; 3 reducible; 4 precision exhausted;
// 5 budget exceeded; 6 not monic / not Salem; 7 reduction did not terminate;
// 8 no real root above 1; 9 degree cap exceeded; 10 cache I/O.
int exit_code(ErrorCode code);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bclab
