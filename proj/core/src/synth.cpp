#include "ctqe/synth.hpp"

#include <cmath>

#include "ctqe/format.hpp"

namespace ctqe {

std::string synth_trace_id(const SynthSpec& spec) {
  if (const auto* t = std::get_if<GridThreshold>(&spec.mode))
    return "synth-threshold-" + format_shortest(t->tau) + "-" + std::to_string(spec.n_lines);
  return "synth-alternating-" + std::to_string(spec.n_lines);
}

SynthOutput generate(const SynthSpec& spec) {
  if (spec.n_lines < 3) throw InvalidSpec("n_lines must be at least 3");
  if (const auto* t = std::get_if<GridThreshold>(&spec.mode); t != nullptr && !(t->tau > 0.0 && t->tau < 1.0))
    throw InvalidSpec("tau must lie in (0, 1)");
  LintCategory category;
  try {
    category = parse_code_category(spec.code);
  } catch (const UnknownCategory&) {
    throw InvalidSpec("invalid lint code \"" + spec.code + "\"");
  }

  SynthOutput out;
  TranslationTrace trace;
  trace.id = synth_trace_id(spec);
  trace.source_lang = "synthetic";
  trace.target_lang = "python3";
  trace.source_text = "";
  trace.beam_size = 1;
  trace.model_id = "synthetic-grid";
  trace.tokens.reserve(static_cast<std::size_t>(2 * spec.n_lines));

  const double n = spec.n_lines;
  for (int i = 0; i < spec.n_lines; ++i) {
    const double u = (i + 0.5) / n;
    trace.tokens.push_back(Token::word("v" + std::to_string(i), 1.0 - u));
    trace.tokens.push_back(Token::control(TokenKind::Newline, 1.0));

    bool inject = false;
    if (const auto* t = std::get_if<GridThreshold>(&spec.mode))
      inject = u >= t->tau;
    else
      inject = i % 2 == 0;
    if (inject) {
      LintFinding f;
      f.code = spec.code;
      f.category = category;
      f.symbol = "synthetic-finding";
      f.line = i + 1;
      f.column = 0;
      f.message = "injected finding";
      f.trace_id = trace.id;
      out.findings.push_back(std::move(f));
    }
  }
  out.corpus.traces.push_back(std::move(trace));
  return out;
}

}  // namespace ctqe
