#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace ctqe {

struct ProcessResult {
  std::string stdout_data;
  int exit_status = 0;  // exit code, or 128 + signal number
  bool timed_out = false;
};

/// Runs `argv` (resolved through PATH), captures standard output and
/// discards standard error. Throws LinterNotFound when the executable
/// cannot be started. On timeout the child is killed and `timed_out` set.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

}  // namespace ctqe
