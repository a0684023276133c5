#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace famfair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCap = 3;

/// Runs one command line (without the program name). Machine documents and
/// traces go to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace famfair::cli
