#pragma once

// Point-biserial correlation between per-line lint indicators and line
// uncertainty, plus corpus-level violation frequencies.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctqe/error.hpp"
#include "ctqe/lint.hpp"
#include "ctqe/metrics.hpp"

namespace ctqe {

struct LineKey {
  std::string trace_id;
  int line = 1;

  friend auto operator<=>(const LineKey&, const LineKey&) = default;
};

/// One entry per line of the whole corpus. ys[i] is 1 iff line keys[i] has
/// at least one finding with `code`.
struct DichotomousSeries {
  std::string code;
  Metric metric = Metric::Joint;
  std::vector<double> xs;
  std::vector<int> ys;
  std::vector<LineKey> keys;
};

enum class Degeneracy { None, DegenerateDichotomy, ZeroVariance, TooFewSamples };

std::string_view to_string(Degeneracy d);

struct CorrelationResult {
  std::string code;
  LintCategory category = LintCategory::Error;
  Metric metric = Metric::Joint;
  std::optional<double> r;  // empty when the series is degenerate
  Degeneracy degeneracy = Degeneracy::None;
  long n_lines = 0;
  long n_positive_lines = 0;
  long n_translations = 0;  // translations in which the code is observed
  std::optional<double> t_stat;
};

class DegenerateDichotomy : public AnalysisError {
 public:
  DegenerateDichotomy() : AnalysisError("dichotomous variable has a single class") {}
};
class ZeroVariance : public AnalysisError {
 public:
  ZeroVariance() : AnalysisError("continuous variable has zero variance") {}
};
class TooFewSamples : public AnalysisError {
 public:
  explicit TooFewSamples(std::size_t n) : AnalysisError("need at least 3 samples, got " + std::to_string(n)) {}
};

/// Builds the pooled series for `code`. Findings flagged out of range are
/// skipped; an in-range finding on a line missing from `uncertainties`
/// throws AnalysisError.
DichotomousSeries dichotomize(const std::vector<LintFinding>& findings,
                              const std::vector<LineUncertainty>& uncertainties, const std::string& code,
                              Metric metric);

/// Pearson correlation of (xs, ys) with population moments, computed as
/// (M1 - M0) / sigma_x * sqrt(p q). Throws on degenerate input.
CorrelationResult point_biserial(const DichotomousSeries& series);

/// t = r sqrt(n - 2) / sqrt(1 - r^2); infinite for |r| = 1.
double t_statistic(double r, long n);

/// One row per (observed code, metric). Rows are grouped by category
/// (E, R, W, C, F, I), then n_translations descending, code, metric.
std::vector<CorrelationResult> correlation_table(const std::vector<LintFinding>& findings,
                                                 const std::vector<LineUncertainty>& uncertainties,
                                                 const std::vector<Metric>& metrics = {Metric::Joint, Metric::Min});

struct FrequencyEntry {
  std::string code;
  std::string symbol;
  double translation_fraction = 0.0;
  long translation_count = 0;
  long occurrence_count = 0;
};

/// Sorted by translation_fraction descending, then code.
std::vector<FrequencyEntry> violation_frequencies(const std::map<std::string, std::vector<LintFinding>>& by_trace,
                                                  long total_translations);

}  // namespace ctqe
