#pragma once

// Detokenization of a trace into target source text, with the exact
// token -> (line, column span) alignment used to attribute probabilities.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctqe/trace.hpp"

namespace ctqe {

inline constexpr int kIndentWidth = 4;

/// 1-based inclusive character (code point) columns.
struct ColumnRange {
  int start = 1;
  int end = 1;

  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

struct TokenSpan {
  std::size_t token_index = 0;
  int line = 1;                        // 1-based
  std::optional<ColumnRange> columns;  // empty for control tokens

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct RenderedCode {
  std::string text;
  std::vector<TokenSpan> spans;  // indexed by token index
  int line_count = 1;
  /// line_tokens[line - 1] holds the ordered token indices attributed to `line`.
  std::vector<std::vector<std::size_t>> line_tokens;

  /// Text of a single line without its terminating newline.
  std::string_view line_text(int line) const;

 private:
  friend RenderedCode render(const TranslationTrace& trace);
  std::vector<std::size_t> line_offsets_;
};

class IndentUnderflow : public TraceError {
 public:
  explicit IndentUnderflow(std::size_t token_index);
  std::size_t token_index() const { return token_index_; }

 private:
  std::size_t token_index_;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t size);
};

/// Space-joins Word tokens; Newline ends the current line; Indent/Dedent
/// change the depth (4 spaces per level) used as the prefix of the next line
/// that starts with a Word. Newline tokens belong to the line they end;
/// Indent/Dedent belong to the line being built when they occur. A trailing
/// Newline does not open a new line; tokens after the last Newline do.
RenderedCode render(const TranslationTrace& trace);

int line_of(const RenderedCode& rendered, std::size_t token_index);

/// Number of Unicode code points in a UTF-8 string; malformed bytes count
/// as one column each.
int utf8_length(std::string_view s);

/// File extension used when writing rendered code for `target_lang`.
std::string_view source_extension(std::string_view target_lang);

}  // namespace ctqe
