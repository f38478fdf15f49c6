#pragma once

#include <iosfwd>

namespace rlvr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the rlvr-mass tool. Subcommands: analyze, simulate, sweep,
/// lemma-check, adaptive. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rlvr::cli
