#pragma once

#include <iosfwd>

namespace compsemi::cli {

/// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kUsageError = 2;

/// Runs the compsemi command line. Results go to `out` (or the --out file),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compsemi::cli
