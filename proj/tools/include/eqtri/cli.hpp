#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eqtri::cli {

enum ExitCode : int {
  ok = 0,
  internal_error = 1,
  validation_error = 2,
  io_error = 3,
};

/// Runs one subcommand. `args` excludes the program name. Artifacts go to the
/// paths given by --out (stdout when absent or "-"); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqtri::cli
