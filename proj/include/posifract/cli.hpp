#pragma once

// Command-line front end: `posifract fit|attractor|verify`.

namespace posifract {

/// Exit codes: 0 success, 2 validation or parameter failure, 3 non-convergence,
/// 4 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitUsage = 4;

int run_cli(int argc, char** argv);

}  // namespace posifract
