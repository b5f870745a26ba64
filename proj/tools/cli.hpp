#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ctqe::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kTraceError = 2,
  kLinterError = 3,
  kDegenerate = 4,
};

/// Entry point of the `ctqe` command. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctqe::cli
