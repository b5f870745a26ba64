#pragma once

#include <stdexcept>
#include <string>

namespace ctqe {

/// Root of every exception thrown by the toolkit. The CLI maps the
/// subclasses below onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, duplicate, or otherwise unusable translation traces.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Linter invocation or linter output failures.
class LintError : public Error {
 public:
  using Error::Error;
};

/// Numeric preconditions of the uncertainty metrics and statistics.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// Report emission failures.
class ReportError : public Error {
 public:
  using Error::Error;
};

/// Filesystem read/write failures.
class IoFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ctqe
