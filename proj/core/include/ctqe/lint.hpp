#pragma once

// Linter adapter: runs an external linter with machine-readable output and
// normalizes the result into LintFinding records.

#include <chrono>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctqe/error.hpp"

namespace ctqe {

enum class LintCategory { Error, Refactor, Warning, Convention, Fatal, Info };

std::string_view to_string(LintCategory category);  // "error", "refactor", ...
char category_letter(LintCategory category);          // 'E', 'R', ...
/// Sort rank used for report grouping: E, R, W, C, F, I.
int category_rank(LintCategory category);

struct LintFinding {
  std::string code;  // e.g. "E0602"
  LintCategory category = LintCategory::Error;
  std::string symbol;  // e.g. "undefined-variable"
  int line = 1;        // 1-based
  int column = 0;      // 0-based
  std::string message;
  std::string trace_id;
  /// False when `line` lies outside the rendered file. Such findings are kept
  /// for reporting but excluded from statistics.
  bool in_range = true;

  friend bool operator==(const LintFinding&, const LintFinding&) = default;
};

/// Ordering used for every finding list: (line, column, code), then symbol
/// and message so that the order is total.
bool finding_less(const LintFinding& a, const LintFinding& b);

inline const std::set<std::string>& default_ignored_codes() {
  static const std::set<std::string> codes{"C0111", "C0326", "R0201"};
  return codes;
}

struct LintConfig {
  /// Executable followed by arguments; the token "{file}" is replaced by the
  /// path of the file to lint, or the path is appended if it is absent.
  std::vector<std::string> linter_command{"pylint", "--output-format=json", "{file}"};
  std::set<std::string> ignored_codes = default_ignored_codes();
  std::chrono::seconds timeout{30};
};

class UnknownCategory : public LintError {
 public:
  explicit UnknownCategory(std::string code) : LintError("unknown lint category in code \"" + code + "\"") {}
};

class LinterNotFound : public LintError {
 public:
  explicit LinterNotFound(const std::string& what) : LintError("linter not found: " + what) {}
};

class LinterTimeout : public LintError {
 public:
  LinterTimeout(const std::string& file, std::chrono::seconds limit)
      : LintError("linter timed out after " + std::to_string(limit.count()) + " s on " + file) {}
};

class OutputParseError : public LintError {
 public:
  OutputParseError(std::string reason, std::string raw_excerpt);
  const std::string& raw_excerpt() const { return raw_excerpt_; }

 private:
  std::string raw_excerpt_;
};

/// Category from the first character of a lint code. Codes must be one
/// letter followed by four digits.
LintCategory parse_code_category(std::string_view code);

/// Parses Pylint machine-readable output: either the `json` format (a
/// top-level array of messages) or the `json2` format (an object with a
/// "messages" array). Unknown fields are ignored. Ignored codes are dropped
/// and the result is sorted with finding_less.
std::vector<LintFinding> parse_lint_output(std::string_view raw, std::string_view trace_id,
                                           const std::set<std::string>& ignored_codes);

/// Serializes findings in the Pylint `json` format; parse_lint_output reads
/// it back.
std::string findings_to_lint_json(const std::vector<LintFinding>& findings, std::string_view path);

struct LinterRun {
  std::vector<LintFinding> findings;
  std::string raw_output;
  int exit_status = 0;
};

/// Runs the configured linter on `file`. A nonzero exit status is not an
/// error by itself.
LinterRun run_linter_raw(const std::filesystem::path& file, std::string_view trace_id, const LintConfig& config);

std::vector<LintFinding> run_linter(const std::filesystem::path& file, std::string_view trace_id,
                                    const LintConfig& config);

/// Stub mode: reads pre-recorded output from `<stub_dir>/<file_stem>.lint.json`.
LinterRun read_stub_lint(const std::filesystem::path& stub_dir, std::string_view file_stem,
                         std::string_view trace_id, const LintConfig& config);

/// First line printed by `<linter> --version`, or "unknown".
std::string linter_version(const LintConfig& config);

/// Marks findings whose line is outside [1, line_count] as out of range and
/// returns how many were marked.
std::size_t flag_out_of_range(std::vector<LintFinding>& findings, int line_count);

/// Splits a command line into arguments, honoring single and double quotes.
std::vector<std::string> split_command(std::string_view command);

}  // namespace ctqe
