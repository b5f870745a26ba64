#pragma once

// Report emission: correlation tables (CSV/JSON/Markdown), the violation
// frequency chart (CSV + SVG), and annotated per-line code views
// (HTML + ANSI text).

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ctqe/error.hpp"
#include "ctqe/lint.hpp"
#include "ctqe/metrics.hpp"
#include "ctqe/render.hpp"
#include "ctqe/stats.hpp"
#include "ctqe/trace.hpp"

namespace ctqe {

enum class ReportFormat { Csv, Json, Md, Html, Ansi, Svg };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view name);  // throws ReportError

inline std::set<ReportFormat> all_report_formats() {
  return {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Md,
          ReportFormat::Html, ReportFormat::Ansi, ReportFormat::Svg};
}

struct ReportConfig {
  double highlight_threshold = 0.95;  // tokens with p below this are highlighted
  double min_frequency = 0.05;        // chart shows entries strictly above this
  std::set<ReportFormat> formats = all_report_formats();
  std::filesystem::path output_dir = ".";

  bool wants(ReportFormat f) const { return formats.count(f) != 0; }
};

class EmptyReport : public ReportError {
 public:
  EmptyReport() : ReportError("no frequency entry passes the chart filter") {}
};

class InconsistentInputs : public ReportError {
 public:
  using ReportError::ReportError;
};

/// "67%" for 0.67: nearest integer percent.
std::string percent_label(double fraction);

std::string frequencies_to_csv(const std::vector<FrequencyEntry>& entries);
/// Horizontal bar chart of the entries with fraction > min_frequency.
std::string frequencies_to_svg(const std::vector<FrequencyEntry>& entries, double min_frequency);

struct ChartArtifacts {
  std::filesystem::path csv_path;
  std::filesystem::path svg_path;  // empty if not written
  std::size_t bar_count = 0;
};

/// Writes frequencies.csv (all entries) and frequencies.svg (filtered).
/// Throws EmptyReport, after the CSV is written, when no entry passes.
ChartArtifacts emit_frequency_chart(const std::vector<FrequencyEntry>& entries, const ReportConfig& config);

std::string correlations_to_csv(const std::vector<CorrelationResult>& table);
std::string correlations_to_json(const std::vector<CorrelationResult>& table);
/// Codes as columns grouped by category, one row per metric.
std::string correlations_to_markdown(const std::vector<CorrelationResult>& table);

/// Writes correlations.{csv,json,md} for the requested formats; returns the
/// paths written.
std::vector<std::filesystem::path> emit_correlation_report(const std::vector<CorrelationResult>& table,
                                                           const ReportConfig& config);

struct AnnotatedCode {
  std::string html;
  std::string ansi;
  std::size_t highlighted_tokens = 0;
};

/// Builds both annotated views of one trace. `findings` and `uncertainties`
/// must all belong to `trace`; in-range findings and uncertainties must
/// reference existing lines (InconsistentInputs otherwise). Out-of-range
/// findings are listed below the code.
AnnotatedCode annotate_code(const TranslationTrace& trace, const RenderedCode& rendered,
                            const std::vector<LintFinding>& findings,
                            const std::vector<LineUncertainty>& uncertainties, const ReportConfig& config);

/// Writes annotated/<trace-id>.html and/or .txt under output_dir.
AnnotatedCode emit_annotated_code(const TranslationTrace& trace, const RenderedCode& rendered,
                                  const std::vector<LintFinding>& findings,
                                  const std::vector<LineUncertainty>& uncertainties, const ReportConfig& config);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ctqe
