#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "ctqe/render.hpp"
#include "test_support.hpp"

namespace ctqe {
namespace {

using testing::ded;
using testing::ind;
using testing::make_trace;
using testing::nl;
using testing::w;

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

TEST(Render, SpaceJoinSingleLine) {
  const auto r = render(make_trace("t", {w("x"), w("="), w("1")}));
  EXPECT_EQ(r.text, "x = 1");
  EXPECT_EQ(r.line_count, 1);
  ASSERT_EQ(r.spans.size(), 3u);
  EXPECT_EQ(r.spans[0], (TokenSpan{0, 1, ColumnRange{1, 1}}));
  EXPECT_EQ(r.spans[1], (TokenSpan{1, 1, ColumnRange{3, 3}}));
  EXPECT_EQ(r.spans[2], (TokenSpan{2, 1, ColumnRange{5, 5}}));
}

TEST(Render, NewlineEndsLineAndBelongsToIt) {
  const auto r = render(make_trace("t", {w("a"), nl(), w("b")}));
  EXPECT_EQ(r.text, "a\nb");
  EXPECT_EQ(r.line_count, 2);
  EXPECT_EQ(r.line_text(1), "a");
  EXPECT_EQ(r.line_text(2), "b");
  EXPECT_EQ(r.spans[1].line, 1);
  EXPECT_FALSE(r.spans[1].columns.has_value());
}

// Positions checked against an independent scan of the rendered text.
TEST(Render, IndentedFunctionMatchesCharacterOracle) {
  const auto trace = make_trace("t", {w("def"), w("f"), w("("), w(")"), w(":"), nl(), ind(), w("return"), w("0"), nl()});
  const auto r = render(trace);
  EXPECT_EQ(r.text, "def f ( ) :\n    return 0\n");
  EXPECT_EQ(r.line_count, 2);
  EXPECT_EQ(r.spans[6].line, 2);  // ind belongs to the line after it

  const auto lines = split_lines(r.text);
  ASSERT_EQ(lines.size(), 2u);
  std::size_t line_idx = 0;
  std::size_t search_from = 0;
  for (std::size_t i = 0; i < trace.tokens.size(); ++i) {
    const Token& tok = trace.tokens[i];
    if (tok.kind == TokenKind::Newline) {
      ++line_idx;
      search_from = 0;
      continue;
    }
    if (tok.kind != TokenKind::Word) continue;
    const auto pos = lines[line_idx].find(tok.text, search_from);
    ASSERT_NE(pos, std::string::npos);
    const int start = static_cast<int>(pos) + 1;
    const int end = start + static_cast<int>(tok.text.size()) - 1;
    EXPECT_EQ(r.spans[i].line, static_cast<int>(line_idx) + 1) << i;
    EXPECT_EQ(r.spans[i].columns, (ColumnRange{start, end})) << i;
    search_from = pos + tok.text.size();
  }
}

TEST(LineOf, Examples) {
  const auto r =
      render(make_trace("t", {w("def"), w("f"), w("("), w(")"), w(":"), nl(), ind(), w("return"), w("0"), nl()}));
  EXPECT_EQ(line_of(r, 7), 2);  // "return"
  EXPECT_EQ(line_of(r, 5), 1);  // first nl
  EXPECT_THROW(line_of(r, 10), IndexOutOfRange);
}

TEST(Render, TrailingNewlineAddsNoPhantomLine) {
  const auto r = render(make_trace("t", {w("a"), nl(), w("b"), nl()}));
  EXPECT_EQ(r.line_count, 2);
  EXPECT_EQ(r.text, "a\nb\n");
}

TEST(Render, ConsecutiveNewlinesMakeEmptyLine) {
  const auto r = render(make_trace("t", {w("a"), nl(0.5), nl(0.25), w("b")}));
  EXPECT_EQ(r.text, "a\n\nb");
  EXPECT_EQ(r.line_count, 3);
  EXPECT_EQ(r.line_tokens[1], std::vector<std::size_t>{2});
  EXPECT_EQ(r.line_text(2), "");
}

TEST(Render, TokensAfterLastNewlineOpenALine) {
  const auto r = render(make_trace("t", {w("if"), w("x"), w(":"), nl(), ind(), w("y"), nl(), ded()}));
  EXPECT_EQ(r.line_count, 3);
  EXPECT_EQ(r.line_tokens[2], std::vector<std::size_t>{7});
  EXPECT_EQ(r.text, "if x :\n    y\n");
}

TEST(Render, DedentRestoresDepth) {
  const auto r = render(make_trace(
      "t", {w("a"), nl(), ind(), w("b"), nl(), ind(), w("c"), nl(), ded(), ded(), w("d"), nl()}));
  EXPECT_EQ(r.text, "a\n    b\n        c\nd\n");
  EXPECT_EQ(r.line_tokens[3], (std::vector<std::size_t>{8, 9, 10, 11}));
}

TEST(Render, DedentAtDepthZeroThrows) {
  EXPECT_THROW(render(make_trace("t", {w("a"), nl(), ded(), w("b")})), IndentUnderflow);
}

TEST(Render, ColumnsCountCodePoints) {
  const auto r = render(make_trace("t", {w("é"), w("λx"), w("y")}));
  EXPECT_EQ(r.spans[0].columns, (ColumnRange{1, 1}));
  EXPECT_EQ(r.spans[1].columns, (ColumnRange{3, 4}));
  EXPECT_EQ(r.spans[2].columns, (ColumnRange{6, 6}));
}

TEST(Render, ExtensionByTargetLanguage) {
  EXPECT_EQ(source_extension("python3"), ".py");
  EXPECT_EQ(source_extension("java"), ".java");
  EXPECT_EQ(source_extension("cobol"), ".txt");
}

// Splitting each rendered line recovers its Word tokens; every token lands on
// exactly one line; line_count follows the Newline rule.
TEST(Render, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    const auto trace = testing::random_trace(rng, "r" + std::to_string(iter));
    const auto r = render(trace);
    std::vector<int> seen(trace.tokens.size(), 0);
    int expected_lines = 1;
    for (std::size_t i = 0; i < trace.tokens.size(); ++i)
      if (trace.tokens[i].kind == TokenKind::Newline && i + 1 < trace.tokens.size()) ++expected_lines;
    ASSERT_EQ(r.line_count, expected_lines);
    ASSERT_EQ(static_cast<int>(r.line_tokens.size()), r.line_count);

    std::vector<std::size_t> joined;
    for (int line = 1; line <= r.line_count; ++line) {
      const auto& idx = r.line_tokens[static_cast<std::size_t>(line - 1)];
      std::vector<std::string> words;
      for (std::size_t i : idx) {
        ++seen[i];
        joined.push_back(i);
        EXPECT_EQ(line_of(r, i), line);
        if (trace.tokens[i].kind == TokenKind::Word) words.push_back(trace.tokens[i].text);
      }
      std::string text(r.line_text(line));
      const auto first = text.find_first_not_of(' ');
      text = first == std::string::npos ? "" : text.substr(first);
      std::vector<std::string> parts;
      std::stringstream ss(text);
      std::string part;
      while (std::getline(ss, part, ' ')) parts.push_back(part);
      EXPECT_EQ(parts, words) << "line " << line;
    }
    for (int count : seen) EXPECT_EQ(count, 1);
    std::vector<std::size_t> all(trace.tokens.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    EXPECT_EQ(joined, all);
    EXPECT_EQ(render(trace).text, r.text);
  }
}

}  // namespace
}  // namespace ctqe
