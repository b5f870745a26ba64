#include "ctqe/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "ctqe/format.hpp"
#include "json.hpp"

namespace ctqe {

namespace {

constexpr const char* kHighlightColor = "#f4a6a6";
constexpr const char* kAnsiHighlight = "\x1b[41m";
constexpr const char* kAnsiReset = "\x1b[0m";

std::string_view control_glyph(TokenKind kind) {
  switch (kind) {
    case TokenKind::Newline: return "↵";  // ↵
    case TokenKind::Indent: return "⇥";   // ⇥
    case TokenKind::Dedent: return "⇤";   // ⇤
    case TokenKind::Word: break;
  }
  return "";
}

std::string_view control_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Newline: return "newline";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::Word: break;
  }
  return "word";
}

std::string pad_right(std::string s, std::size_t width) {
  const auto len = static_cast<std::size_t>(utf8_length(s));
  if (len < width) s.append(width - len, ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  const auto len = static_cast<std::size_t>(utf8_length(s));
  if (len < width) s.insert(0, width - len, ' ');
  return s;
}

std::string category_title(LintCategory c) {
  std::string name(to_string(c));
  name.front() = static_cast<char>(name.front() - 'a' + 'A');
  return name + " (" + category_letter(c) + ")";
}

std::string r_cell(const CorrelationResult& row) { return row.r ? format_fixed(*row.r, 3) : "n/a"; }

// A piece of one annotated line: plain text or a single token.
struct Segment {
  std::string text;
  bool is_token = false;
  bool highlighted = false;
  double prob = 1.0;
  TokenKind kind = TokenKind::Word;
};

std::vector<Segment> line_segments(const TranslationTrace& trace, const RenderedCode& rendered, int line,
                                   double threshold, std::size_t& highlighted) {
  std::vector<Segment> out;
  int column = 0;  // columns emitted so far, excluding control glyphs
  for (std::size_t idx : rendered.line_tokens[static_cast<std::size_t>(line - 1)]) {
    const Token& tok = trace.tokens[idx];
    const TokenSpan& span = rendered.spans[idx];
    const bool hl = tok.prob < threshold;
    if (hl) ++highlighted;
    if (tok.kind == TokenKind::Word) {
      const int gap = span.columns->start - 1 - column;
      if (gap > 0) out.push_back(Segment{std::string(static_cast<std::size_t>(gap), ' ')});
      out.push_back(Segment{tok.text, true, hl, tok.prob, tok.kind});
      column = span.columns->end;
    } else if (hl) {
      out.push_back(Segment{std::string(control_glyph(tok.kind)), true, true, tok.prob, tok.kind});
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Json: return "json";
    case ReportFormat::Md: return "md";
    case ReportFormat::Html: return "html";
    case ReportFormat::Ansi: return "ansi";
    case ReportFormat::Svg: return "svg";
  }
  return "csv";
}

ReportFormat parse_report_format(std::string_view name) {
  for (ReportFormat f : all_report_formats())
    if (to_string(f) == name) return f;
  throw ReportError("unknown report format \"" + std::string(name) + "\"");
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoFailure("write failed for " + path.string());
}

std::string percent_label(double fraction) { return std::to_string(std::lround(fraction * 100.0)) + "%"; }

std::string frequencies_to_csv(const std::vector<FrequencyEntry>& entries) {
  std::string out = "code,symbol,translation_fraction,translation_count,occurrence_count\n";
  for (const auto& e : entries) {
    out += csv_field(e.code) + ',' + csv_field(e.symbol) + ',' + format_shortest(e.translation_fraction) + ',' +
           std::to_string(e.translation_count) + ',' + std::to_string(e.occurrence_count) + '\n';
  }
  return out;
}

std::string frequencies_to_svg(const std::vector<FrequencyEntry>& entries, double min_frequency) {
  constexpr int kMargin = 10;
  constexpr int kLabelWidth = 260;
  constexpr int kBarMaxWidth = 400;
  constexpr int kBarHeight = 12;
  constexpr int kRowPitch = 18;
  constexpr int kTop = 30;

  std::vector<const FrequencyEntry*> bars;
  for (const auto& e : entries)
    if (e.translation_fraction > min_frequency) bars.push_back(&e);

  const int width = kMargin + kLabelWidth + 6 + kBarMaxWidth + 50;
  const int height = kTop + static_cast<int>(bars.size()) * kRowPitch + kMargin;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + std::to_string(kMargin) + "\" y=\"18\" font-size=\"13\">Lint violations (% of translations, > " +
         percent_label(min_frequency) + ")</text>\n";
  const int bar_x = kMargin + kLabelWidth + 6;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const FrequencyEntry& e = *bars[i];
    const int y = kTop + static_cast<int>(i) * kRowPitch;
    const double w = e.translation_fraction * kBarMaxWidth;
    const std::string label = e.symbol.empty() ? e.code : e.symbol + " (" + e.code + ")";
    out += "<text x=\"" + std::to_string(kMargin + kLabelWidth) + "\" y=\"" + std::to_string(y + 10) +
           "\" text-anchor=\"end\">" + html_escape(label) + "</text>\n";
    out += "<rect x=\"" + std::to_string(bar_x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + format_fixed(w, 2) +
           "\" height=\"" + std::to_string(kBarHeight) + "\" fill=\"#c0392b\"/>\n";
    out += "<text x=\"" + format_fixed(bar_x + w + 4, 2) + "\" y=\"" + std::to_string(y + 10) + "\">" +
           percent_label(e.translation_fraction) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

ChartArtifacts emit_frequency_chart(const std::vector<FrequencyEntry>& entries, const ReportConfig& config) {
  ChartArtifacts art;
  art.csv_path = config.output_dir / "frequencies.csv";
  write_file(art.csv_path, frequencies_to_csv(entries));
  art.bar_count = static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const auto& e) {
    return e.translation_fraction > config.min_frequency;
  }));
  if (art.bar_count == 0) throw EmptyReport();
  if (config.wants(ReportFormat::Svg)) {
    art.svg_path = config.output_dir / "frequencies.svg";
    write_file(art.svg_path, frequencies_to_svg(entries, config.min_frequency));
  }
  return art;
}

std::string correlations_to_csv(const std::vector<CorrelationResult>& table) {
  std::string out = "code,category,metric,r,n_lines,n_positive_lines,n_translations,t_stat\n";
  for (const auto& row : table) {
    out += csv_field(row.code) + ',' + std::string(to_string(row.category)) + ',' + std::string(to_string(row.metric)) +
           ',' + (row.r ? format_shortest(*row.r) : "n/a") + ',' + std::to_string(row.n_lines) + ',' +
           std::to_string(row.n_positive_lines) + ',' + std::to_string(row.n_translations) + ',' +
           (row.t_stat ? format_shortest(*row.t_stat) : "n/a") + '\n';
  }
  return out;
}

std::string correlations_to_json(const std::vector<CorrelationResult>& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table) {
    nlohmann::ordered_json j;
    j["code"] = row.code;
    j["category"] = std::string(to_string(row.category));
    j["metric"] = std::string(to_string(row.metric));
    j["r"] = row.r ? nlohmann::ordered_json(*row.r) : nlohmann::ordered_json(nullptr);
    j["status"] = row.r ? "ok" : std::string(to_string(row.degeneracy));
    j["n_lines"] = row.n_lines;
    j["n_positive_lines"] = row.n_positive_lines;
    j["n_translations"] = row.n_translations;
    // JSON has no infinity; |r| = 1 yields null here and "inf" in CSV.
    j["t_stat"] = row.t_stat && std::isfinite(*row.t_stat) ? nlohmann::ordered_json(*row.t_stat)
                                                           : nlohmann::ordered_json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string correlations_to_markdown(const std::vector<CorrelationResult>& table) {
  std::string out = "# Point-biserial correlation of line uncertainty with lint findings\n";
  if (table.empty()) return out + "\n| Code |\n|------|\n";

  std::vector<Metric> metrics;
  for (Metric m : {Metric::Joint, Metric::Min})
    if (std::any_of(table.begin(), table.end(), [&](const auto& r) { return r.metric == m; })) metrics.push_back(m);

  // Codes per category in table order.
  std::vector<std::pair<LintCategory, std::vector<std::string>>> groups;
  std::map<std::pair<std::string, Metric>, const CorrelationResult*> cell;
  std::map<std::string, long> n_translations;
  for (const auto& row : table) {
    cell[{row.code, row.metric}] = &row;
    if (n_translations.count(row.code) != 0) continue;
    n_translations[row.code] = row.n_translations;
    if (groups.empty() || groups.back().first != row.category) groups.push_back({row.category, {}});
    groups.back().second.push_back(row.code);
  }

  for (const auto& [category, codes] : groups) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Code"});
    rows.push_back({"n"});
    for (Metric m : metrics) rows.push_back({"r_pb^" + std::string(to_string(m))});
    for (const auto& code : codes) {
      rows[0].push_back(code);
      rows[1].push_back(std::to_string(n_translations[code]));
      for (std::size_t k = 0; k < metrics.size(); ++k) {
        auto it = cell.find({code, metrics[k]});
        rows[2 + k].push_back(it == cell.end() ? "n/a" : r_cell(*it->second));
      }
    }
    std::vector<std::size_t> widths(rows[0].size(), 3);
    for (const auto& r : rows)
      for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], r[c].size());

    out += "\n## " + category_title(category) + "\n\n";
    auto emit_row = [&](const std::vector<std::string>& r) {
      out += '|';
      for (std::size_t c = 0; c < r.size(); ++c) out += ' ' + pad_right(r[c], widths[c]) + " |";
      out += '\n';
    };
    emit_row(rows[0]);
    out += '|';
    for (std::size_t w : widths) out += std::string(w + 2, '-') + '|';
    out += '\n';
    for (std::size_t i = 1; i < rows.size(); ++i) emit_row(rows[i]);
  }
  return out;
}

std::vector<std::filesystem::path> emit_correlation_report(const std::vector<CorrelationResult>& table,
                                                           const ReportConfig& config) {
  std::vector<std::filesystem::path> written;
  if (config.wants(ReportFormat::Csv)) {
    written.push_back(config.output_dir / "correlations.csv");
    write_file(written.back(), correlations_to_csv(table));
  }
  if (config.wants(ReportFormat::Json)) {
    written.push_back(config.output_dir / "correlations.json");
    write_file(written.back(), correlations_to_json(table));
  }
  if (config.wants(ReportFormat::Md)) {
    written.push_back(config.output_dir / "correlations.md");
    write_file(written.back(), correlations_to_markdown(table));
  }
  return written;
}

AnnotatedCode annotate_code(const TranslationTrace& trace, const RenderedCode& rendered,
                            const std::vector<LintFinding>& findings,
                            const std::vector<LineUncertainty>& uncertainties, const ReportConfig& config) {
  const auto line_count = static_cast<std::size_t>(rendered.line_count);
  std::vector<std::vector<const LintFinding*>> line_findings(line_count);
  std::vector<const LintFinding*> unplaced;
  for (const auto& f : findings) {
    if (f.trace_id != trace.id)
      throw InconsistentInputs("finding for trace \"" + f.trace_id + "\" in report of \"" + trace.id + "\"");
    if (!f.in_range) {
      unplaced.push_back(&f);
      continue;
    }
    if (f.line < 1 || f.line > rendered.line_count)
      throw InconsistentInputs(f.code + " references unknown line " + std::to_string(f.line));
    line_findings[static_cast<std::size_t>(f.line - 1)].push_back(&f);
  }
  std::vector<const LineUncertainty*> line_u(line_count, nullptr);
  for (const auto& u : uncertainties) {
    if (u.trace_id != trace.id || u.line < 1 || u.line > rendered.line_count)
      throw InconsistentInputs("uncertainty references unknown line " + u.trace_id + ":" + std::to_string(u.line));
    line_u[static_cast<std::size_t>(u.line - 1)] = &u;
  }

  struct Row {
    std::string codes;
    std::string codes_title;
    std::vector<Segment> segments;
    std::string gutter;
  };
  AnnotatedCode out;
  std::vector<Row> rows(line_count);
  std::size_t code_width = 4;
  std::size_t text_width = 0;
  for (std::size_t i = 0; i < line_count; ++i) {
    Row& row = rows[i];
    auto fs = line_findings[i];
    std::sort(fs.begin(), fs.end(), [](const auto* a, const auto* b) { return finding_less(*a, *b); });
    std::vector<std::string> codes;
    for (const auto* f : fs) {
      if (std::find(codes.begin(), codes.end(), f->code) == codes.end()) codes.push_back(f->code);
      if (!row.codes_title.empty()) row.codes_title += '\n';
      row.codes_title += f->code + " " + f->symbol + ": " + f->message;
    }
    for (const auto& c : codes) row.codes += (row.codes.empty() ? "" : " ") + c;
    row.segments = line_segments(trace, rendered, static_cast<int>(i + 1), config.highlight_threshold,
                                 out.highlighted_tokens);
    if (line_u[i] != nullptr) row.gutter = format_fixed(line_u[i]->joint, 2) + "/" + format_fixed(line_u[i]->min_based, 2);
    code_width = std::max(code_width, row.codes.size());
    std::size_t w = 0;
    for (const auto& s : row.segments) w += static_cast<std::size_t>(utf8_length(s.text));
    text_width = std::max(text_width, w);
  }

  const std::string threshold = format_shortest(config.highlight_threshold);
  const std::size_t number_width = std::to_string(line_count).size();

  // HTML
  std::string& html = out.html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + html_escape(trace.id) +
          "</title>\n</head>\n<body style=\"font-family:sans-serif;margin:16px\">\n";
  html += "<h2 style=\"font-size:16px\">" + html_escape(trace.id) + "</h2>\n";
  html += "<p style=\"font-size:12px;color:#555\">" + html_escape(trace.source_lang) + " &#8594; " +
          html_escape(trace.target_lang) + " &#183; model " + html_escape(trace.model_id) + " &#183; beam " +
          std::to_string(trace.beam_size) + " &#183; tokens with p &lt; " + threshold + " highlighted</p>\n";
  html += "<table style=\"border-collapse:collapse;font-family:monospace;font-size:13px\">\n";
  html +=
      "<tr style=\"color:#555\"><th style=\"text-align:left;padding:0 8px\">lint</th>"
      "<th style=\"text-align:right;padding:0 8px\">#</th><th style=\"text-align:left\">code</th>"
      "<th style=\"text-align:right;padding:0 8px\">joint/min</th></tr>\n";
  for (std::size_t i = 0; i < line_count; ++i) {
    const Row& row = rows[i];
    html += "<tr><td style=\"color:#b00;padding:0 8px;white-space:nowrap\"";
    if (!row.codes_title.empty()) html += " title=\"" + html_escape(row.codes_title) + "\"";
    html += ">" + html_escape(row.codes) + "</td>";
    html += "<td style=\"color:#999;text-align:right;padding:0 8px\">" + std::to_string(i + 1) + "</td>";
    html += "<td style=\"white-space:pre\">";
    for (const auto& s : row.segments) {
      if (!s.highlighted) {
        html += html_escape(s.text);
        continue;
      }
      const std::string p = format_shortest(s.prob);
      std::string title = "p=" + p;
      if (s.kind != TokenKind::Word) title += " (" + std::string(control_name(s.kind)) + ")";
      html += "<span style=\"background:" + std::string(kHighlightColor) + "\" data-p=\"" + p + "\" title=\"" +
              html_escape(title) + "\">" + html_escape(s.text) + "</span>";
    }
    html += "</td><td style=\"color:#555;text-align:right;padding:0 8px\">" + row.gutter + "</td></tr>\n";
  }
  html += "</table>\n";
  if (!unplaced.empty()) {
    html += "<p style=\"font-size:12px\">Findings outside the rendered file:</p>\n<ul style=\"font-size:12px\">\n";
    for (const auto* f : unplaced)
      html += "<li>" + html_escape(f->code + " " + f->symbol + " (line " + std::to_string(f->line) + "): " + f->message) +
              "</li>\n";
    html += "</ul>\n";
  }
  html += "<p style=\"font-size:12px;color:#555\">highlighted tokens: " + std::to_string(out.highlighted_tokens) +
          "</p>\n</body>\n</html>\n";

  // ANSI text
  std::string& ansi = out.ansi;
  ansi += "# " + trace.id + " (" + trace.source_lang + " -> " + trace.target_lang + ", p < " + threshold +
          " highlighted)\n";
  for (std::size_t i = 0; i < line_count; ++i) {
    const Row& row = rows[i];
    std::string text;
    std::size_t visible = 0;
    for (const auto& s : row.segments) {
      visible += static_cast<std::size_t>(utf8_length(s.text));
      if (s.highlighted)
        text += kAnsiHighlight + s.text + kAnsiReset;
      else
        text += s.text;
    }
    text.append(text_width - visible, ' ');
    ansi += pad_right(row.codes, code_width) + " " + pad_left(std::to_string(i + 1), number_width) + " | " + text +
            " | " + row.gutter + "\n";
  }
  for (const auto* f : unplaced)
    ansi += "! " + f->code + " " + f->symbol + " (line " + std::to_string(f->line) + "): " + f->message + "\n";
  ansi += "# highlighted tokens: " + std::to_string(out.highlighted_tokens) + "\n";
  return out;
}

AnnotatedCode emit_annotated_code(const TranslationTrace& trace, const RenderedCode& rendered,
                                  const std::vector<LintFinding>& findings,
                                  const std::vector<LineUncertainty>& uncertainties, const ReportConfig& config) {
  AnnotatedCode doc = annotate_code(trace, rendered, findings, uncertainties, config);
  const auto dir = config.output_dir / "annotated";
  const std::string stem = file_stem_for_id(trace.id);
  if (config.wants(ReportFormat::Html)) write_file(dir / (stem + ".html"), doc.html);
  if (config.wants(ReportFormat::Ansi)) write_file(dir / (stem + ".txt"), doc.ansi);
  return doc;
}

}  // namespace ctqe
