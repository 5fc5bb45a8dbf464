#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qnet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kModelError = 2,
  kNumericalError = 3,
};

/// Runs one `qnet` invocation. `args` excludes the program name. Results go
/// to `out` (or the --out file), diagnostics to `err` as `ERRCLASS: message`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet::cli
