#pragma once

#include <ostream>

namespace ungar::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_cap_exceeded = 3;
inline constexpr int exit_invariant_violation = 4;

/// Entry point of the ungar_lab tool. Results go to `out` (or the --out
/// file), diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ungar::cli
