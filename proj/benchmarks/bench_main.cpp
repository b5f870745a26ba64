#include <benchmark/benchmark.h>

#include <random>

#include "ctqe/metrics.hpp"
#include "ctqe/pipeline.hpp"
#include "ctqe/render.hpp"
#include "ctqe/stats.hpp"
#include "ctqe/synth.hpp"

namespace {

using namespace ctqe;

std::vector<double> random_probs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::vector<double> out(n);
  for (double& p : out) p = unit(rng);
  return out;
}

void BM_LineUncertainty(benchmark::State& state) {
  const auto probs = random_probs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(line_uncertainty(probs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LineUncertainty)->Arg(8)->Arg(50)->Arg(1000);

void BM_PointBiserial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DichotomousSeries s;
  s.code = "E0602";
  s.xs = random_probs(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    s.ys.push_back(i % 7 == 0 ? 1 : 0);
    s.keys.push_back({"t", static_cast<int>(i + 1)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(point_biserial(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PointBiserial)->Arg(1000)->Arg(100000);

void BM_Render(benchmark::State& state) {
  const auto out = generate(SynthSpec{static_cast<int>(state.range(0)), GridAlternating{}, "E0602"});
  const auto& trace = out.corpus.traces.front();
  for (auto _ : state) benchmark::DoNotOptimize(render(trace));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.tokens.size()));
}
BENCHMARK(BM_Render)->Arg(100)->Arg(10000);

void BM_StubPipeline(benchmark::State& state) {
  const Corpus corpus = load_traces(std::string(CTQE_FIXTURE_DIR) + "/corpus/traces.jsonl");
  LintStageConfig cfg;
  cfg.stub_dir = std::string(CTQE_FIXTURE_DIR) + "/corpus/lint";
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_corpus(corpus, cfg, {Metric::Joint, Metric::Min}));
}
BENCHMARK(BM_StubPipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
