#pragma once

#include <iosfwd>

namespace wp::cli {

enum Exit : int {
    ok = 0,
    usage = 1,
    infeasible = 2,
    cap_exceeded = 3,
    invalid = 4,
    mismatch = 5,
};

/// Entry point of the `wp` tool. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wp::cli
