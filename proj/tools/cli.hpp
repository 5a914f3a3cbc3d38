#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternal = 2;

/// Runs `qmi <args...>` (args excludes the program name). The JSON report goes
/// to `out` (or to --output), diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmi::cli
