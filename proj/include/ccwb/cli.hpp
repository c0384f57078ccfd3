#pragma once

// Command-line front end: seeded, reproducible experiment drivers around the
// library modules.  Every command is deterministic given its flags (plus the
// optional CCWB_WORKERS override, which never changes output bytes).

#include <iosfwd>
#include <string>
#include <vector>

namespace ccwb::cli {

// Stable exit-code contract.
inline constexpr int exit_ok = 0;      // success
inline constexpr int exit_io = 1;      // missing/unreadable/unwritable files
inline constexpr int exit_params = 2;  // invalid parameters or flags
inline constexpr int exit_failed = 3;  // probabilistic procedure failed (e.g. derandomization)

// Runs one invocation; `args` excludes the program name.  All regular output
// goes to `out`, diagnostics to `err`.  Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// argv adapter for main().
int run(int argc, char** argv);

}  // namespace ccwb::cli
