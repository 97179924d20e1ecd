// Command-line front end: `run`, `experiment` and `bounds` subcommands.
//
// Exit codes: 0 success, 2 invalid input, 3 runtime failure, 4 experiment
// finished with some failed points. Results go to `out` as key=value text;
// diagnostics go to `err`.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dvbai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitPartial = 4;

struct Terminal {
  bool color = false;  // ANSI color on diagnostics
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            Terminal terminal = {});

}  // namespace dvbai::cli
