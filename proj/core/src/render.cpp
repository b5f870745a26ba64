#include "ctqe/render.hpp"

namespace ctqe {

IndentUnderflow::IndentUnderflow(std::size_t token_index)
    : TraceError("Dedent at indentation depth 0 (token " + std::to_string(token_index) + ")"),
      token_index_(token_index) {}

IndexOutOfRange::IndexOutOfRange(std::size_t index, std::size_t size)
    : Error("token index " + std::to_string(index) + " out of range (token count " + std::to_string(size) + ")") {}

int utf8_length(std::string_view s) {
  int n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string_view source_extension(std::string_view target_lang) {
  if (target_lang == "python" || target_lang == "python3" || target_lang == "py") return ".py";
  if (target_lang == "java") return ".java";
  if (target_lang == "cpp" || target_lang == "c++") return ".cpp";
  return ".txt";
}

std::string_view RenderedCode::line_text(int line) const {
  if (line < 1 || line > line_count) return {};
  const std::size_t begin = line_offsets_[line - 1];
  std::size_t end = line < line_count ? line_offsets_[line] : text.size();
  if (end > begin && text[end - 1] == '\n') --end;
  return std::string_view(text).substr(begin, end - begin);
}

RenderedCode render(const TranslationTrace& trace) {
  struct Line {
    std::string content;
    bool terminated = false;
    bool has_word = false;
    int columns = 0;
  };

  RenderedCode out;
  out.spans.reserve(trace.tokens.size());
  std::vector<Line> lines(1);
  out.line_tokens.emplace_back();
  int depth = 0;
  bool open_pending = false;

  for (std::size_t i = 0; i < trace.tokens.size(); ++i) {
    const Token& tok = trace.tokens[i];
    if (open_pending) {
      lines.emplace_back();
      out.line_tokens.emplace_back();
      open_pending = false;
    }
    Line& line = lines.back();
    const int line_number = static_cast<int>(lines.size());
    TokenSpan span{i, line_number, std::nullopt};

    switch (tok.kind) {
      case TokenKind::Word: {
        if (!line.has_word) {
          line.content.assign(static_cast<std::size_t>(kIndentWidth * depth), ' ');
          line.columns = kIndentWidth * depth;
          line.has_word = true;
        } else {
          line.content += ' ';
          line.columns += 1;
        }
        const int start = line.columns + 1;
        line.content += tok.text;
        line.columns += utf8_length(tok.text);
        span.columns = ColumnRange{start, line.columns};
        break;
      }
      case TokenKind::Newline:
        line.terminated = true;
        open_pending = true;
        break;
      case TokenKind::Indent:
        ++depth;
        break;
      case TokenKind::Dedent:
        if (depth == 0) throw IndentUnderflow(i);
        --depth;
        break;
    }
    out.spans.push_back(span);
    out.line_tokens.back().push_back(i);
  }

  out.line_count = static_cast<int>(lines.size());
  out.line_offsets_.reserve(lines.size());
  for (const Line& line : lines) {
    out.line_offsets_.push_back(out.text.size());
    out.text += line.content;
    if (line.terminated) out.text += '\n';
  }
  return out;
}

int line_of(const RenderedCode& rendered, std::size_t token_index) {
  if (token_index >= rendered.spans.size()) throw IndexOutOfRange(token_index, rendered.spans.size());
  return rendered.spans[token_index].line;
}

}  // namespace ctqe
