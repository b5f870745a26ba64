#include "ctqe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ctqe/format.hpp"
#include "ctqe/report.hpp"

namespace ctqe {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RenderMap render_corpus(const Corpus& corpus, int jobs) {
  std::vector<RenderedCode> out(corpus.traces.size());
  parallel_for(corpus.traces.size(), jobs, [&](std::size_t i) { out[i] = render(corpus.traces[i]); });
  RenderMap map;
  for (std::size_t i = 0; i < out.size(); ++i) map.emplace(corpus.traces[i].id, std::move(out[i]));
  return map;
}

std::filesystem::path rendered_file_name(const TranslationTrace& trace) {
  return file_stem_for_id(trace.id) + std::string(source_extension(trace.target_lang));
}

void write_rendered(const Corpus& corpus, const RenderMap& rendered, const std::filesystem::path& dir, int jobs) {
  std::filesystem::create_directories(dir);
  parallel_for(corpus.traces.size(), jobs, [&](std::size_t i) {
    const auto& trace = corpus.traces[i];
    write_file(dir / rendered_file_name(trace), rendered.at(trace.id).text);
  });
}

LintStageResult lint_corpus(const Corpus& corpus, const RenderMap& rendered, const LintStageConfig& config) {
  if (!config.stub_dir && !config.work_dir) throw LintError("lint stage needs a work directory or a stub directory");
  const std::size_t n = corpus.traces.size();
  std::vector<std::vector<LintFinding>> per_trace(n);

  if (config.work_dir) {
    write_rendered(corpus, rendered, *config.work_dir / "rendered", config.jobs);
    std::filesystem::create_directories(*config.work_dir / "lint");
  }
  parallel_for(n, config.jobs, [&](std::size_t i) {
    const TranslationTrace& trace = corpus.traces[i];
    const std::string stem = file_stem_for_id(trace.id);
    LinterRun run;
    if (config.stub_dir) {
      run = read_stub_lint(*config.stub_dir, stem, trace.id, config.lint);
    } else {
      run = run_linter_raw(*config.work_dir / "rendered" / rendered_file_name(trace), trace.id, config.lint);
    }
    if (config.work_dir) write_file(*config.work_dir / "lint" / (stem + ".lint.json"), run.raw_output);
    per_trace[i] = std::move(run.findings);
  });

  LintStageResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const TranslationTrace& trace = corpus.traces[i];
    auto& findings = per_trace[i];
    result.out_of_range += flag_out_of_range(findings, rendered.at(trace.id).line_count);
    for (const auto& f : findings) {
      if (!f.in_range)
        result.warnings.push_back("finding " + f.code + " on line " + std::to_string(f.line) + " of trace \"" +
                                  trace.id + "\" is outside the rendered file; excluded from statistics");
    }
    result.findings.emplace(trace.id, std::move(findings));
  }
  return result;
}

std::vector<LintFinding> Analysis::all_findings() const {
  std::vector<LintFinding> out;
  for (const auto& [_, fs] : lint.findings) out.insert(out.end(), fs.begin(), fs.end());
  return out;
}

bool Analysis::has_defined_correlation() const {
  return std::any_of(correlations.begin(), correlations.end(), [](const auto& r) { return r.r.has_value(); });
}

namespace {

void compute_statistics(const Corpus& corpus, Analysis& a, const std::vector<Metric>& metrics) {
  a.uncertainties = corpus_line_uncertainties(corpus, a.rendered);
  a.correlations = correlation_table(a.all_findings(), a.uncertainties, metrics);
  a.frequencies = violation_frequencies(a.lint.findings, static_cast<long>(corpus.traces.size()));
}

}  // namespace

Analysis analyze_corpus(const Corpus& corpus, const LintStageConfig& config, const std::vector<Metric>& metrics) {
  Analysis a;
  a.rendered = render_corpus(corpus, config.jobs);
  a.lint = lint_corpus(corpus, a.rendered, config);
  compute_statistics(corpus, a, metrics);
  return a;
}

Analysis analyze_with_findings(const Corpus& corpus, const std::vector<LintFinding>& findings,
                               const std::vector<Metric>& metrics, int jobs) {
  Analysis a;
  a.rendered = render_corpus(corpus, jobs);
  for (const auto& t : corpus.traces) a.lint.findings[t.id];
  for (const auto& f : findings) {
    auto it = a.lint.findings.find(f.trace_id);
    if (it == a.lint.findings.end()) throw AnalysisError("finding for unknown trace \"" + f.trace_id + "\"");
    it->second.push_back(f);
  }
  for (const auto& t : corpus.traces) {
    auto& fs = a.lint.findings[t.id];
    std::stable_sort(fs.begin(), fs.end(), finding_less);
    a.lint.out_of_range += flag_out_of_range(fs, a.rendered.at(t.id).line_count);
  }
  compute_statistics(corpus, a, metrics);
  return a;
}

}  // namespace ctqe
