#pragma once

#include <iosfwd>

namespace qsat {

/// Exit codes: 0 success, 1 other failure, 2 parse error, 3 resource guard, 4 invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitInvariant = 4;

/// Noisy simulation width limit (ideal runs use the statevector limit).
inline constexpr int kMaxNoisyWidth = 20;

/// Entry point for the `qsat` tool: solve, check-sat, cost, noise-sweep.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qsat
