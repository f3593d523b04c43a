#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace focuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // property violated, validation errors
inline constexpr int kExitUsage = 2;    // bad arguments, unreadable or unparsable input

// Runs `focuse <args...>` (program name excluded) writing reports to out and
// errors to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        bool color = false);

}  // namespace focuse::cli
