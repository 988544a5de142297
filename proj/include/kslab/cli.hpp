#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kslab::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 invalid input.
inline constexpr int kOk = 0;
inline constexpr int kNumericalFailure = 1;
inline constexpr int kInvalidInput = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace kslab::cli
