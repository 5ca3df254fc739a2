#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codeperturb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitEnvironment = 1;  // I/O and provider failures
inline constexpr int kExitValidation = 2;   // bad flags or bad input data

// Runs one command line (without the program name). Normal output goes to
// `out`, the per-stage log and error messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codeperturb::cli
