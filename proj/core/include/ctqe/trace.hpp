#pragma once

// Translation-trace data model: the decoded target tokens of one translated
// program together with the decoder's per-token conditional probabilities.

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ctqe/error.hpp"

namespace ctqe {

enum class TokenKind { Word, Newline, Indent, Dedent };

/// Wire-format tag ("w", "nl", "ind", "ded").
std::string_view to_wire(TokenKind kind);
std::optional<TokenKind> token_kind_from_wire(std::string_view tag);

inline bool is_control(TokenKind kind) { return kind != TokenKind::Word; }

struct Alternative {
  std::string text;
  double prob = 1.0;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct Token {
  std::string text;
  double prob = 1.0;  // p(y_t | y_<t, x, theta)
  TokenKind kind = TokenKind::Word;
  std::optional<std::vector<Alternative>> alternatives;  // top-k, prob descending

  static Token word(std::string text, double prob) {
    return Token{std::move(text), prob, TokenKind::Word, std::nullopt};
  }
  static Token control(TokenKind kind, double prob) { return Token{{}, prob, kind, std::nullopt}; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct TranslationTrace {
  std::string id;
  std::string source_lang;
  std::string target_lang;
  std::string source_text;
  std::vector<Token> tokens;
  int beam_size = 1;
  std::string model_id;

  friend bool operator==(const TranslationTrace&, const TranslationTrace&) = default;
};

/// Ordered collection of traces with unique ids. Unknown top-level record
/// keys are kept in `metadata` under `trace_extra_key(id, key)` as JSON text.
struct Corpus {
  std::vector<TranslationTrace> traces;
  std::map<std::string, std::string> metadata;

  const TranslationTrace* find(std::string_view id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

std::string trace_extra_key(std::string_view trace_id, std::string_view key);

enum class ViolationKind {
  EmptyId,
  EmptyTokens,
  NonPositiveBeamSize,
  ProbabilityOutOfRange,
  EmptyWordToken,
  WhitespaceInWordToken,
  TextOnControlToken,
  AlternativeProbabilityOutOfRange,
  UnsortedAlternatives,
  IndentUnderflow,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> token_index;

  std::string describe() const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every TranslationTrace/Token invariant. Returns one entry per
/// violation; an empty result means the trace is valid.
std::vector<Violation> validate_trace(const TranslationTrace& trace);

class MalformedRecord : public TraceError {
 public:
  MalformedRecord(std::size_t line_number, std::string reason);
  std::size_t line_number() const { return line_number_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_number_;
  std::string reason_;
};

class DuplicateId : public TraceError {
 public:
  explicit DuplicateId(std::string id);
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class EmptyStream : public TraceError {
 public:
  EmptyStream() : TraceError("trace stream contains no records") {}
};

/// Reads newline-delimited JSON trace records. Blank lines are skipped.
/// Every record is validated; the first failure aborts ingestion.
Corpus ingest_traces(std::istream& in);
Corpus load_traces(const std::string& path);

/// Serializes a corpus back into the wire format (one record per line),
/// including preserved unknown keys.
void write_traces(std::ostream& out, const Corpus& corpus);
std::string serialize_trace(const TranslationTrace& trace, const Corpus* owner = nullptr);

}  // namespace ctqe
