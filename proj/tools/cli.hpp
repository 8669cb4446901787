#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ldq::cli {

enum ExitCode : int {
  kOk = 0,
  kBudgetStop = 2,
  kUsage = 3,
  kDataError = 4,
  kTransport = 5,
};

// Runs one invocation. `args` excludes the program name.
int RunCli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ldq::cli
