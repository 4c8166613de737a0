#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpforest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitConfigError = 3;

// Runs the dpforest command line. `args` excludes the program name. Data goes
// to `out`, logs and machine-readable errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpforest::cli
