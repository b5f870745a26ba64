#include "ctqe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctqe/numeric.hpp"

namespace ctqe {

std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::None: return "none";
    case Degeneracy::DegenerateDichotomy: return "DegenerateDichotomy";
    case Degeneracy::ZeroVariance: return "ZeroVariance";
    case Degeneracy::TooFewSamples: return "TooFewSamples";
  }
  return "none";
}

DichotomousSeries dichotomize(const std::vector<LintFinding>& findings,
                              const std::vector<LineUncertainty>& uncertainties, const std::string& code,
                              Metric metric) {
  std::vector<std::size_t> order(uncertainties.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key_of = [&](std::size_t i) { return LineKey{uncertainties[i].trace_id, uncertainties[i].line}; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key_of(a) < key_of(b); });

  std::set<LineKey> positive;
  for (const auto& f : findings)
    if (f.in_range && f.code == code) positive.insert(LineKey{f.trace_id, f.line});

  DichotomousSeries series;
  series.code = code;
  series.metric = metric;
  series.xs.reserve(order.size());
  series.ys.reserve(order.size());
  series.keys.reserve(order.size());
  for (std::size_t i : order) {
    LineKey key = key_of(i);
    if (!series.keys.empty() && !(series.keys.back() < key))
      throw AnalysisError("duplicate line uncertainty for " + key.trace_id + ":" + std::to_string(key.line));
    series.xs.push_back(uncertainties[i].value(metric));
    series.ys.push_back(positive.count(key) != 0 ? 1 : 0);
    series.keys.push_back(std::move(key));
  }

  for (const LineKey& key : positive) {
    if (!std::binary_search(series.keys.begin(), series.keys.end(), key))
      throw AnalysisError("finding " + code + " on " + key.trace_id + ":" + std::to_string(key.line) +
                          " has no line uncertainty");
  }
  return series;
}

double t_statistic(double r, long n) {
  const double denom = std::sqrt(1.0 - r * r);
  const double num = r * std::sqrt(static_cast<double>(n - 2));
  if (denom == 0.0) return std::copysign(INFINITY, r);
  return num / denom;
}

CorrelationResult point_biserial(const DichotomousSeries& series) {
  const std::size_t n = series.xs.size();
  if (series.ys.size() != n || series.keys.size() != n)
    throw AnalysisError("series components have different lengths");
  if (n < 3) throw TooFewSamples(n);

  CompensatedSum sum_all, sum_pos, sum_neg;
  long n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (series.ys[i] != 0 && series.ys[i] != 1) throw AnalysisError("dichotomous values must be 0 or 1");
    sum_all.add(series.xs[i]);
    if (series.ys[i] == 1) {
      sum_pos.add(series.xs[i]);
      ++n_pos;
    } else {
      sum_neg.add(series.xs[i]);
    }
  }
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DegenerateDichotomy();
  if (std::all_of(series.xs.begin(), series.xs.end(), [&](double x) { return x == series.xs.front(); }))
    throw ZeroVariance();

  const double dn = static_cast<double>(n);
  const double mean = sum_all.value() / dn;
  const double mean_pos = sum_pos.value() / static_cast<double>(n_pos);
  const double mean_neg = sum_neg.value() / static_cast<double>(n_neg);

  CompensatedSum squares;
  bool pos_constant = true;
  bool neg_constant = true;
  double first_pos = 0.0, first_neg = 0.0;
  bool seen_pos = false, seen_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = series.xs[i] - mean;
    squares.add(d * d);
    if (series.ys[i] == 1) {
      if (!seen_pos) first_pos = series.xs[i], seen_pos = true;
      pos_constant = pos_constant && series.xs[i] == first_pos;
    } else {
      if (!seen_neg) first_neg = series.xs[i], seen_neg = true;
      neg_constant = neg_constant && series.xs[i] == first_neg;
    }
  }
  const double sigma = std::sqrt(squares.value() / dn);

  double r = 0.0;
  if (pos_constant && neg_constant) {
    // Two distinct constant groups: total separation.
    r = first_pos > first_neg ? 1.0 : -1.0;
  } else {
    const double p = static_cast<double>(n_pos) / dn;
    const double q = static_cast<double>(n_neg) / dn;
    r = (mean_pos - mean_neg) / sigma * std::sqrt(p * q);
    r = std::clamp(r, -1.0, 1.0);
  }

  std::set<std::string> translations;
  for (std::size_t i = 0; i < n; ++i)
    if (series.ys[i] == 1) translations.insert(series.keys[i].trace_id);

  CorrelationResult out;
  out.code = series.code;
  try {
    out.category = parse_code_category(series.code);
  } catch (const UnknownCategory&) {
    out.category = LintCategory::Info;
  }
  out.metric = series.metric;
  out.r = r;
  out.n_lines = static_cast<long>(n);
  out.n_positive_lines = n_pos;
  out.n_translations = static_cast<long>(translations.size());
  out.t_stat = t_statistic(r, out.n_lines);
  return out;
}

std::vector<CorrelationResult> correlation_table(const std::vector<LintFinding>& findings,
                                                 const std::vector<LineUncertainty>& uncertainties,
                                                 const std::vector<Metric>& metrics) {
  struct CodeInfo {
    LintCategory category;
    std::set<std::string> translations;
  };
  std::map<std::string, CodeInfo> codes;
  for (const auto& f : findings) {
    auto [it, _] = codes.try_emplace(f.code, CodeInfo{f.category, {}});
    it->second.translations.insert(f.trace_id);
  }

  std::vector<CorrelationResult> rows;
  for (const auto& [code, info] : codes) {
    for (Metric metric : metrics) {
      DichotomousSeries series = dichotomize(findings, uncertainties, code, metric);
      CorrelationResult row;
      try {
        row = point_biserial(series);
      } catch (const DegenerateDichotomy&) {
        row.degeneracy = Degeneracy::DegenerateDichotomy;
      } catch (const ZeroVariance&) {
        row.degeneracy = Degeneracy::ZeroVariance;
      } catch (const TooFewSamples&) {
        row.degeneracy = Degeneracy::TooFewSamples;
      }
      row.code = code;
      row.category = info.category;
      row.metric = metric;
      row.n_lines = static_cast<long>(series.xs.size());
      row.n_positive_lines = std::count(series.ys.begin(), series.ys.end(), 1);
      row.n_translations = static_cast<long>(info.translations.size());
      rows.push_back(std::move(row));
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const CorrelationResult& a, const CorrelationResult& b) {
    const int ca = category_rank(a.category), cb = category_rank(b.category);
    if (ca != cb) return ca < cb;
    if (a.n_translations != b.n_translations) return a.n_translations > b.n_translations;
    if (a.code != b.code) return a.code < b.code;
    return static_cast<int>(a.metric) < static_cast<int>(b.metric);
  });
  return rows;
}

std::vector<FrequencyEntry> violation_frequencies(const std::map<std::string, std::vector<LintFinding>>& by_trace,
                                                  long total_translations) {
  if (total_translations < 1) throw AnalysisError("total_translations must be at least 1");
  std::map<std::string, FrequencyEntry> entries;
  for (const auto& [trace_id, findings] : by_trace) {
    std::set<std::string> seen;
    for (const auto& f : findings) {
      auto [it, inserted] = entries.try_emplace(f.code);
      FrequencyEntry& e = it->second;
      if (inserted) {
        e.code = f.code;
        e.symbol = f.symbol;
      }
      ++e.occurrence_count;
      if (seen.insert(f.code).second) ++e.translation_count;
    }
  }

  std::vector<FrequencyEntry> out;
  out.reserve(entries.size());
  for (auto& [_, e] : entries) {
    e.translation_fraction = static_cast<double>(e.translation_count) / static_cast<double>(total_translations);
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const FrequencyEntry& a, const FrequencyEntry& b) {
    if (a.translation_count != b.translation_count) return a.translation_count > b.translation_count;
    return a.code < b.code;
  });
  return out;
}

}  // namespace ctqe
