#pragma once

// Command dispatch for the fejer tool, kept out of main() so tests can drive
// it in process. Reports go to `out` as JSON, the one-line summary to `err`.
//
// Exit codes: 0 success, 1 mathematical rejection, 2 input error,
// 3 convergence or numerical failure.

#include <iosfwd>

namespace fejer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fejer::cli
