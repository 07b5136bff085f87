#pragma once

#include <iosfwd>

namespace sbic {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUnsupported = 2;

// Entry point of the sbic command line; testable in process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbic
