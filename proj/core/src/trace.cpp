#include "ctqe/trace.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace ctqe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kKnownKeys[] = {"id",         "source_lang", "target_lang", "source_text",
                                           "beam_size",  "model_id",    "tokens"};

bool is_known_key(std::string_view key) {
  return std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) != std::end(kKnownKeys);
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

bool prob_in_range(double p) { return p > 0.0 && p <= 1.0; }

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw MalformedRecord(line, std::string("missing field \"") + key + "\"");
  if (!it->is_string()) throw MalformedRecord(line, std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

double require_prob(const json& obj, std::size_t line, std::string_view where) {
  auto it = obj.find("p");
  if (it == obj.end()) throw MalformedRecord(line, std::string(where) + ": missing \"p\"");
  if (!it->is_number()) throw MalformedRecord(line, std::string(where) + ": \"p\" must be a number");
  return it->get<double>();
}

Token parse_token(const json& j, std::size_t line, std::size_t index) {
  const std::string where = "token " + std::to_string(index);
  if (!j.is_object()) throw MalformedRecord(line, where + ": must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "t" && key != "p" && key != "k" && key != "alt")
      throw MalformedRecord(line, where + ": unknown field \"" + key + "\"");
  }
  Token tok;
  if (auto k = j.find("k"); k != j.end()) {
    if (!k->is_string()) throw MalformedRecord(line, where + ": \"k\" must be a string");
    auto kind = token_kind_from_wire(k->get<std::string>());
    if (!kind) throw MalformedRecord(line, where + ": unknown kind \"" + k->get<std::string>() + "\"");
    tok.kind = *kind;
  }
  if (auto t = j.find("t"); t != j.end()) {
    if (!t->is_string()) throw MalformedRecord(line, where + ": \"t\" must be a string");
    tok.text = t->get<std::string>();
  } else if (tok.kind == TokenKind::Word) {
    throw MalformedRecord(line, where + ": missing \"t\"");
  }
  tok.prob = require_prob(j, line, where);
  if (auto alt = j.find("alt"); alt != j.end()) {
    if (!alt->is_array()) throw MalformedRecord(line, where + ": \"alt\" must be an array");
    std::vector<Alternative> alts;
    for (const auto& a : *alt) {
      if (!a.is_object()) throw MalformedRecord(line, where + ": alternative must be an object");
      alts.push_back(Alternative{require_string(a, "t", line), require_prob(a, line, where + " alternative")});
    }
    tok.alternatives = std::move(alts);
  }
  return tok;
}

TranslationTrace parse_record(const json& j, std::size_t line, std::map<std::string, std::string>& extras) {
  if (!j.is_object()) throw MalformedRecord(line, "record must be a JSON object");
  TranslationTrace trace;
  trace.id = require_string(j, "id", line);
  trace.source_lang = require_string(j, "source_lang", line);
  trace.target_lang = require_string(j, "target_lang", line);
  trace.source_text = require_string(j, "source_text", line);
  trace.model_id = require_string(j, "model_id", line);

  auto beam = j.find("beam_size");
  if (beam == j.end()) throw MalformedRecord(line, "missing field \"beam_size\"");
  if (!beam->is_number_integer()) throw MalformedRecord(line, "field \"beam_size\" must be an integer");
  const auto beam_value = beam->get<long long>();
  if (beam_value < 1 || beam_value > 1'000'000) throw MalformedRecord(line, "beam_size must be positive");
  trace.beam_size = static_cast<int>(beam_value);

  auto tokens = j.find("tokens");
  if (tokens == j.end()) throw MalformedRecord(line, "missing field \"tokens\"");
  if (!tokens->is_array()) throw MalformedRecord(line, "field \"tokens\" must be an array");
  trace.tokens.reserve(tokens->size());
  for (std::size_t i = 0; i < tokens->size(); ++i) trace.tokens.push_back(parse_token((*tokens)[i], line, i));

  for (const auto& [key, value] : j.items()) {
    if (!is_known_key(key)) extras[key] = value.dump();
  }
  return trace;
}

ordered_json token_to_json(const Token& tok) {
  ordered_json j;
  j["t"] = tok.text;
  j["p"] = tok.prob;
  if (tok.kind != TokenKind::Word) j["k"] = std::string(to_wire(tok.kind));
  if (tok.alternatives) {
    ordered_json alts = ordered_json::array();
    for (const auto& a : *tok.alternatives) alts.push_back(ordered_json{{"t", a.text}, {"p", a.prob}});
    j["alt"] = std::move(alts);
  }
  return j;
}

}  // namespace

std::string_view to_wire(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "w";
    case TokenKind::Newline: return "nl";
    case TokenKind::Indent: return "ind";
    case TokenKind::Dedent: return "ded";
  }
  return "w";
}

std::optional<TokenKind> token_kind_from_wire(std::string_view tag) {
  if (tag == "w") return TokenKind::Word;
  if (tag == "nl") return TokenKind::Newline;
  if (tag == "ind") return TokenKind::Indent;
  if (tag == "ded") return TokenKind::Dedent;
  return std::nullopt;
}

const TranslationTrace* Corpus::find(std::string_view id) const {
  for (const auto& t : traces)
    if (t.id == id) return &t;
  return nullptr;
}

std::string trace_extra_key(std::string_view trace_id, std::string_view key) {
  std::string out = "trace[";
  out += trace_id;
  out += "].";
  out += key;
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyId: return "EmptyId";
    case ViolationKind::EmptyTokens: return "EmptyTokens";
    case ViolationKind::NonPositiveBeamSize: return "NonPositiveBeamSize";
    case ViolationKind::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ViolationKind::EmptyWordToken: return "EmptyWordToken";
    case ViolationKind::WhitespaceInWordToken: return "WhitespaceInWordToken";
    case ViolationKind::TextOnControlToken: return "TextOnControlToken";
    case ViolationKind::AlternativeProbabilityOutOfRange: return "AlternativeProbabilityOutOfRange";
    case ViolationKind::UnsortedAlternatives: return "UnsortedAlternatives";
    case ViolationKind::IndentUnderflow: return "IndentUnderflow";
  }
  return "Unknown";
}

std::string Violation::describe() const {
  std::string out(to_string(kind));
  if (token_index) out += " at token " + std::to_string(*token_index);
  return out;
}

std::vector<Violation> validate_trace(const TranslationTrace& trace) {
  std::vector<Violation> out;
  if (trace.id.empty()) out.push_back({ViolationKind::EmptyId, std::nullopt});
  if (trace.beam_size < 1) out.push_back({ViolationKind::NonPositiveBeamSize, std::nullopt});
  if (trace.tokens.empty()) out.push_back({ViolationKind::EmptyTokens, std::nullopt});

  long depth = 0;
  for (std::size_t i = 0; i < trace.tokens.size(); ++i) {
    const Token& tok = trace.tokens[i];
    // NaN fails the range test as well.
    if (!prob_in_range(tok.prob)) out.push_back({ViolationKind::ProbabilityOutOfRange, i});
    if (tok.kind == TokenKind::Word) {
      if (tok.text.empty())
        out.push_back({ViolationKind::EmptyWordToken, i});
      else if (has_whitespace(tok.text))
        out.push_back({ViolationKind::WhitespaceInWordToken, i});
    } else if (!tok.text.empty()) {
      out.push_back({ViolationKind::TextOnControlToken, i});
    }
    if (tok.alternatives) {
      const auto& alts = *tok.alternatives;
      if (std::any_of(alts.begin(), alts.end(), [](const Alternative& a) { return !prob_in_range(a.prob); }))
        out.push_back({ViolationKind::AlternativeProbabilityOutOfRange, i});
      if (!std::is_sorted(alts.begin(), alts.end(),
                          [](const Alternative& a, const Alternative& b) { return a.prob > b.prob; }))
        out.push_back({ViolationKind::UnsortedAlternatives, i});
    }
    if (tok.kind == TokenKind::Indent) ++depth;
    if (tok.kind == TokenKind::Dedent) {
      if (depth == 0)
        out.push_back({ViolationKind::IndentUnderflow, i});
      else
        --depth;
    }
  }
  return out;
}

MalformedRecord::MalformedRecord(std::size_t line_number, std::string reason)
    : TraceError("malformed record at line " + std::to_string(line_number) + ": " + reason),
      line_number_(line_number),
      reason_(std::move(reason)) {}

DuplicateId::DuplicateId(std::string id) : TraceError("duplicate trace id \"" + id + "\""), id_(std::move(id)) {}

Corpus ingest_traces(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_number, std::string("invalid JSON: ") + e.what());
    }
    std::map<std::string, std::string> extras;
    TranslationTrace trace = parse_record(j, line_number, extras);
    if (auto violations = validate_trace(trace); !violations.empty())
      throw MalformedRecord(line_number, violations.front().describe());
    if (!seen.insert(trace.id).second) throw DuplicateId(trace.id);
    for (auto& [key, value] : extras) corpus.metadata[trace_extra_key(trace.id, key)] = std::move(value);
    corpus.traces.push_back(std::move(trace));
  }
  if (corpus.traces.empty()) throw EmptyStream();
  return corpus;
}

Corpus load_traces(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open trace file " + path);
  return ingest_traces(in);
}

std::string serialize_trace(const TranslationTrace& trace, const Corpus* owner) {
  ordered_json j;
  j["id"] = trace.id;
  j["source_lang"] = trace.source_lang;
  j["target_lang"] = trace.target_lang;
  j["source_text"] = trace.source_text;
  j["beam_size"] = trace.beam_size;
  j["model_id"] = trace.model_id;
  ordered_json tokens = ordered_json::array();
  for (const auto& tok : trace.tokens) tokens.push_back(token_to_json(tok));
  j["tokens"] = std::move(tokens);
  if (owner != nullptr) {
    const std::string prefix = trace_extra_key(trace.id, "");
    for (auto it = owner->metadata.lower_bound(prefix);
         it != owner->metadata.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
      j[it->first.substr(prefix.size())] = ordered_json::parse(it->second);
    }
  }
  return j.dump();
}

void write_traces(std::ostream& out, const Corpus& corpus) {
  for (const auto& trace : corpus.traces) out << serialize_trace(trace, &corpus) << '\n';
}

}  // namespace ctqe
