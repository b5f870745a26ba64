#pragma once

// End-to-end orchestration: render -> lint -> metrics -> statistics.
// Work fans out per trace; every merge is keyed by trace id so results do
// not depend on the number of workers.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctqe/lint.hpp"
#include "ctqe/metrics.hpp"
#include "ctqe/render.hpp"
#include "ctqe/stats.hpp"
#include "ctqe/trace.hpp"

namespace ctqe {

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. If any call
/// throws, the exception of the lowest index is rethrown after all workers
/// finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

using RenderMap = std::map<std::string, RenderedCode>;
using FindingsMap = std::map<std::string, std::vector<LintFinding>>;

RenderMap render_corpus(const Corpus& corpus, int jobs);

/// Relative path of a trace's rendered file: `<escaped-id><ext>`.
std::filesystem::path rendered_file_name(const TranslationTrace& trace);

/// Writes every rendered trace to `dir`.
void write_rendered(const Corpus& corpus, const RenderMap& rendered, const std::filesystem::path& dir, int jobs);

struct LintStageConfig {
  LintConfig lint;
  std::optional<std::filesystem::path> stub_dir;
  /// Working directory for rendered files (`rendered/`) and raw linter
  /// output (`lint/`). Required unless stub_dir is set.
  std::optional<std::filesystem::path> work_dir;
  int jobs = 1;
};

struct LintStageResult {
  FindingsMap findings;  // every trace has an entry, sorted with finding_less
  std::size_t out_of_range = 0;
  std::vector<std::string> warnings;  // one line per out-of-range finding
};

LintStageResult lint_corpus(const Corpus& corpus, const RenderMap& rendered, const LintStageConfig& config);

struct Analysis {
  RenderMap rendered;
  LintStageResult lint;
  std::vector<LineUncertainty> uncertainties;
  std::vector<CorrelationResult> correlations;
  std::vector<FrequencyEntry> frequencies;

  std::vector<LintFinding> all_findings() const;
  bool has_defined_correlation() const;
};

Analysis analyze_corpus(const Corpus& corpus, const LintStageConfig& config, const std::vector<Metric>& metrics);

/// Same statistics from findings that are already known (no linter).
Analysis analyze_with_findings(const Corpus& corpus, const std::vector<LintFinding>& findings,
                               const std::vector<Metric>& metrics, int jobs = 1);

}  // namespace ctqe
