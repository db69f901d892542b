#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scgbp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; ///< processing failure
inline constexpr int kExitUsage = 2;   ///< usage or validation error

/// Full command-line entry point; args excludes the program name.
/// Diagnostics go to err, --print-config output to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace scgbp::cli
