#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nearsearch {

inline constexpr const char* kVersion = "0.1.0";

// Runs the command line `args` (without the program name). Exit codes:
// 0 proved/valid, 1 inconclusive/invalid, 2 usage or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nearsearch
