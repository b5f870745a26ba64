#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "ctqe/metrics.hpp"
#include "ctqe/render.hpp"
#include "test_support.hpp"

namespace ctqe {
namespace {

using testing::ind;
using testing::make_trace;
using testing::nl;
using testing::w;
using Big = boost::multiprecision::cpp_bin_float_100;

double oracle_joint(const std::vector<double>& probs) {
  Big prod = 1;
  for (double p : probs) prod *= Big(p);
  return static_cast<double>(Big(1) - prod);
}

TEST(LineUncertainty, Examples) {
  auto r = line_uncertainty(std::vector<double>{1.0});
  EXPECT_EQ(r.joint, 0.0);
  EXPECT_EQ(r.min_based, 0.0);

  r = line_uncertainty(std::vector<double>{0.5, 0.5});
  EXPECT_EQ(r.joint, 0.75);
  EXPECT_EQ(r.min_based, 0.5);

  r = line_uncertainty(std::vector<double>{0.9, 0.8, 0.95});
  EXPECT_NEAR(r.joint, 0.316, 1e-12);
  EXPECT_NEAR(r.joint, oracle_joint({0.9, 0.8, 0.95}), 1e-12);
  EXPECT_NEAR(r.min_based, 0.2, 1e-12);
}

TEST(LineUncertainty, Errors) {
  EXPECT_THROW(line_uncertainty(std::vector<double>{}), EmptyLine);
  EXPECT_THROW(line_uncertainty(std::vector<double>{0.5, 0.0}), DomainError);
  EXPECT_THROW(line_uncertainty(std::vector<double>{1.0000001}), DomainError);
  EXPECT_THROW(line_uncertainty(std::vector<double>{-0.1}), DomainError);
  EXPECT_THROW(line_uncertainty(std::vector<double>{std::nan("")}), DomainError);
}

TEST(LineUncertainty, SingleTokenIsExact) {
  for (double p : {0.1, 0.3, 0.7, 0.999999, 1e-300}) {
    const auto r = line_uncertainty(std::vector<double>{p});
    EXPECT_EQ(r.joint, 1.0 - p);
    EXPECT_EQ(r.min_based, 1.0 - p);
  }
}

TEST(LineUncertainty, LongLowProbabilityLineDoesNotUnderflowWrongly) {
  std::vector<double> probs(2000, 1e-3);
  const auto r = line_uncertainty(probs);
  EXPECT_EQ(r.joint, 1.0);  // product is far below the smallest double
  EXPECT_NEAR(r.min_based, 0.999, 1e-15);

  std::vector<double> near_one(5000, 1.0 - 1e-9);
  EXPECT_NEAR(line_uncertainty(near_one).joint, oracle_joint(near_one), 1e-15);
}

class MetricProperties : public ::testing::Test {
 protected:
  std::vector<double> random_line() {
    std::uniform_int_distribution<int> len(1, 50);
    std::vector<double> probs(static_cast<std::size_t>(len(rng_)));
    for (double& p : probs) p = testing::random_prob(rng_);
    return probs;
  }
  std::mt19937_64 rng_{12345};
};

TEST_F(MetricProperties, MatchesArbitraryPrecisionOracle) {
  for (int i = 0; i < 2000; ++i) {
    const auto probs = random_line();
    const auto r = line_uncertainty(probs);
    EXPECT_NEAR(r.joint, oracle_joint(probs), 1e-12);
    EXPECT_EQ(r.min_based, 1.0 - *std::min_element(probs.begin(), probs.end()));
    EXPECT_LE(r.min_based, r.joint);
  }
}

TEST_F(MetricProperties, AppendingCertainTokenChangesNothing) {
  for (int i = 0; i < 500; ++i) {
    auto probs = random_line();
    const auto before = line_uncertainty(probs);
    probs.push_back(1.0);
    const auto after = line_uncertainty(probs);
    EXPECT_EQ(before.joint, after.joint);
    EXPECT_EQ(before.min_based, after.min_based);
  }
}

TEST_F(MetricProperties, PermutationInvariant) {
  for (int i = 0; i < 500; ++i) {
    auto probs = random_line();
    const auto a = line_uncertainty(probs);
    std::shuffle(probs.begin(), probs.end(), rng_);
    const auto b = line_uncertainty(probs);
    EXPECT_EQ(a.joint, b.joint);
    EXPECT_EQ(a.min_based, b.min_based);
  }
}

TEST_F(MetricProperties, Monotone) {
  std::uniform_real_distribution<double> shrink(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    auto probs = random_line();
    const auto a = line_uncertainty(probs);
    std::uniform_int_distribution<std::size_t> pick(0, probs.size() - 1);
    probs[pick(rng_)] *= shrink(rng_);
    const auto b = line_uncertainty(probs);
    EXPECT_GE(b.joint, a.joint);
    EXPECT_GE(b.min_based, a.min_based);
  }
}

TEST(TraceLineUncertainties, ControlTokensCount) {
  const auto trace = make_trace("t", {w("a", 0.5), w("b", 0.5), nl(1.0), ind(0.5), w("c", 1.0), nl(1.0)});
  const auto rows = trace_line_uncertainties(trace, render(trace));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].joint, 0.75);
  EXPECT_EQ(rows[0].token_count, 3);
  EXPECT_EQ(rows[1].joint, 0.5);
  EXPECT_EQ(rows[1].min_based, 0.5);
  EXPECT_EQ(rows[1].token_count, 3);
  EXPECT_EQ(rows[1].line, 2);
}

TEST(CorpusLineUncertainties, OrderedByTraceId) {
  Corpus corpus;
  corpus.traces.push_back(make_trace("zeta", {w("x", 0.9)}));
  corpus.traces.push_back(make_trace("alpha", {w("y", 0.8)}));
  std::map<std::string, RenderedCode> rendered;
  for (const auto& t : corpus.traces) rendered.emplace(t.id, render(t));
  const auto rows = corpus_line_uncertainties(corpus, rendered);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].trace_id, "alpha");
  EXPECT_EQ(rows[1].trace_id, "zeta");
  EXPECT_TRUE(corpus_line_uncertainties(Corpus{}, {}).empty());

  rendered.erase("zeta");
  EXPECT_THROW(corpus_line_uncertainties(corpus, rendered), MissingRendering);
}

TEST(UncertaintiesToCsv, HeaderAndRows) {
  const std::vector<LineUncertainty> rows{{"a,b", 1, 0.75, 0.5, 3}, {"c", 2, 0.0, 0.0, 1}};
  EXPECT_EQ(uncertainties_to_csv(rows),
            "trace_id,line,token_count,joint,min\n"
            "\"a,b\",1,3,0.75,0.5\n"
            "c,2,1,0,0\n");
}

TEST(ParseMetric, Names) {
  EXPECT_EQ(parse_metric("joint"), Metric::Joint);
  EXPECT_EQ(parse_metric("min"), Metric::Min);
  EXPECT_THROW(parse_metric("median"), UnknownMetric);
  EXPECT_EQ(to_string(Metric::Min), "min");
}

}  // namespace
}  // namespace ctqe
