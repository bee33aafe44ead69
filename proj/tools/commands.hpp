#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparsetree::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,  // also parse failures in verify
  kExitInfeasible = 2,
  kExitSolver = 3,
  kExitVerifyFailed = 4,
  kExitSizeLimit = 5,
};

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsetree::cli
