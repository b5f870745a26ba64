#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "ctqe/pipeline.hpp"
#include "ctqe/report.hpp"
#include "test_support.hpp"

namespace ctqe {
namespace {

namespace fs = std::filesystem;
using testing::make_trace;
using testing::nl;
using testing::w;

Corpus fixture_corpus() { return load_traces((testing::fixture_dir() / "corpus" / "traces.jsonl").string()); }

LintStageConfig stub_config(int jobs) {
  LintStageConfig cfg;
  cfg.stub_dir = testing::fixture_dir() / "corpus" / "lint";
  cfg.jobs = jobs;
  return cfg;
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int jobs : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  for (int jobs : {1, 8}) {
    try {
      parallel_for(100, jobs, [](std::size_t i) {
        if (i == 71 || i == 13 || i == 90) throw std::runtime_error(std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "13");
    }
  }
}

TEST(RenderCorpus, KeyedById) {
  const auto corpus = fixture_corpus();
  const auto one = render_corpus(corpus, 1);
  const auto many = render_corpus(corpus, 8);
  ASSERT_EQ(one.size(), corpus.traces.size());
  for (const auto& t : corpus.traces) {
    EXPECT_EQ(one.at(t.id).text, many.at(t.id).text);
    EXPECT_EQ(one.at(t.id).spans, many.at(t.id).spans);
  }
}

TEST(RenderCorpus, FixtureRendersToTheOriginalPrograms) {
  const auto corpus = fixture_corpus();
  const auto rendered = render_corpus(corpus, 1);
  const auto& lc0136 = rendered.at("lc0136-single-number");
  EXPECT_EQ(lc0136.text,
            "class Solution :\n"
            "    def singleNumber ( self , nums ) :\n"
            "        x = 0\n"
            "        for n in nums :\n"
            "            x ^= n\n"
            "        return x\n");
  // Blank line after the class header in lc0206.
  EXPECT_EQ(rendered.at("lc0206-reverse-list").line_text(2), "");
}

TEST(RenderedFileName, EscapesAndExtension) {
  auto t = make_trace("a/b c", {w("x")});
  EXPECT_EQ(rendered_file_name(t), fs::path("a%2Fb%20c.py"));
  t.target_lang = "java";
  EXPECT_EQ(rendered_file_name(t).extension(), ".java");
}

TEST(LintCorpus, StubModeWritesWorkFiles) {
  const auto corpus = fixture_corpus();
  const auto rendered = render_corpus(corpus, 2);
  testing::TempDir work;
  auto cfg = stub_config(4);
  cfg.work_dir = work.path();
  const auto result = lint_corpus(corpus, rendered, cfg);
  ASSERT_EQ(result.findings.size(), corpus.traces.size());
  for (const auto& t : corpus.traces) {
    EXPECT_EQ(testing::read_file(work / "rendered" / rendered_file_name(t).string()), rendered.at(t.id).text);
    EXPECT_EQ(testing::read_file(work / "lint" / (t.id + ".lint.json")),
              testing::read_file(*cfg.stub_dir / (t.id + ".lint.json")));
    for (const auto& f : result.findings.at(t.id)) {
      EXPECT_EQ(f.trace_id, t.id);
      EXPECT_EQ(default_ignored_codes().count(f.code), 0u);
    }
    EXPECT_TRUE(std::is_sorted(result.findings.at(t.id).begin(), result.findings.at(t.id).end(), finding_less));
  }
}

TEST(LintCorpus, NeedsADirectory) {
  EXPECT_THROW(lint_corpus(Corpus{}, {}, LintStageConfig{}), LintError);
}

TEST(LintCorpus, MissingStubIsLinterNotFound) {
  Corpus corpus;
  corpus.traces.push_back(make_trace("not-recorded", {w("x")}));
  EXPECT_THROW(lint_corpus(corpus, render_corpus(corpus, 1), stub_config(1)), LinterNotFound);
}

TEST(LintCorpus, OutOfRangeFindingsAreWarnedAndKept) {
  testing::TempDir stub;
  Corpus corpus;
  corpus.traces.push_back(make_trace("t", {w("x", 0.5), nl(), w("y", 0.9)}));
  write_file(stub / "t.lint.json",
             R"([{"message-id":"F0002","line":7,"column":0,"symbol":"astroid-error","message":"boom"},)"
             R"({"message-id":"C0103","line":2,"column":0,"symbol":"invalid-name","message":"m"}])");
  LintStageConfig cfg;
  cfg.stub_dir = stub.path();
  const auto result = lint_corpus(corpus, render_corpus(corpus, 1), cfg);
  EXPECT_EQ(result.out_of_range, 1u);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("F0002"), std::string::npos);
  const auto& fs = result.findings.at("t");
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_TRUE(fs[0].in_range);
  EXPECT_FALSE(fs[1].in_range);
}

TEST(AnalyzeCorpus, FixtureIsIndependentOfJobs) {
  const auto corpus = fixture_corpus();
  const auto a = analyze_corpus(corpus, stub_config(1), {Metric::Joint, Metric::Min});
  const auto b = analyze_corpus(corpus, stub_config(8), {Metric::Joint, Metric::Min});
  EXPECT_EQ(correlations_to_csv(a.correlations), correlations_to_csv(b.correlations));
  EXPECT_EQ(frequencies_to_csv(a.frequencies), frequencies_to_csv(b.frequencies));
  EXPECT_EQ(a.uncertainties, b.uncertainties);
  EXPECT_TRUE(a.has_defined_correlation());

  int lines = 0;
  for (const auto& [_, r] : a.rendered) lines += r.line_count;
  EXPECT_EQ(static_cast<int>(a.uncertainties.size()), lines);
  for (const auto& row : a.correlations) {
    EXPECT_EQ(row.n_lines, lines);
    if (row.r) {
      EXPECT_GT(row.n_positive_lines, 0);
      EXPECT_LT(row.n_positive_lines, row.n_lines);
    }
  }
}

TEST(AnalyzeCorpus, FrequenciesCountTranslations) {
  const auto corpus = fixture_corpus();
  const auto a = analyze_corpus(corpus, stub_config(2), {Metric::Joint});
  for (const auto& e : a.frequencies) {
    long traces_with_code = 0;
    for (const auto& [_, fs] : a.lint.findings)
      traces_with_code += std::any_of(fs.begin(), fs.end(), [&](const auto& f) { return f.code == e.code; });
    EXPECT_EQ(e.translation_count, traces_with_code);
    EXPECT_DOUBLE_EQ(e.translation_fraction, traces_with_code / 10.0);
  }
  const auto e0602 = std::find_if(a.frequencies.begin(), a.frequencies.end(),
                                  [](const auto& e) { return e.code == "E0602"; });
  ASSERT_NE(e0602, a.frequencies.end());
  EXPECT_EQ(e0602->translation_count, 1);
}

TEST(AnalyzeWithFindings, RejectsUnknownTrace) {
  Corpus corpus;
  corpus.traces.push_back(make_trace("t", {w("x")}));
  LintFinding f;
  f.code = "E0602";
  f.trace_id = "other";
  EXPECT_THROW(analyze_with_findings(corpus, {f}, {Metric::Joint}), AnalysisError);
}

}  // namespace
}  // namespace ctqe
