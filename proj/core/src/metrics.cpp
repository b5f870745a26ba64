#include "ctqe/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ctqe/format.hpp"
#include "ctqe/numeric.hpp"

namespace ctqe {

DomainError::DomainError(double p) : AnalysisError("token probability " + format_shortest(p) + " outside (0, 1]") {}

std::string_view to_string(Metric metric) { return metric == Metric::Joint ? "joint" : "min"; }

Metric parse_metric(std::string_view name) {
  if (name == "joint") return Metric::Joint;
  if (name == "min") return Metric::Min;
  throw UnknownMetric(std::string(name));
}

UncertaintyPair line_uncertainty(std::span<const double> probs) {
  if (probs.empty()) throw EmptyLine();
  std::vector<double> below_one;
  below_one.reserve(probs.size());
  double min_p = 1.0;
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError(p);
    min_p = std::min(min_p, p);
    if (p < 1.0) below_one.push_back(p);
  }

  UncertaintyPair out;
  out.min_based = 1.0 - min_p;
  if (below_one.empty()) {
    out.joint = 0.0;
  } else if (below_one.size() == 1) {
    out.joint = 1.0 - below_one.front();
  } else {
    std::sort(below_one.begin(), below_one.end());
    CompensatedSum log_sum;
    for (double p : below_one) log_sum.add(std::log(p));
    // 1 - exp(s) without cancellation when the product is close to 1.
    out.joint = -std::expm1(log_sum.value());
    // prod p <= min p holds exactly; keep it true under rounding.
    out.joint = std::max(out.joint, out.min_based);
  }
  return out;
}

std::vector<LineUncertainty> trace_line_uncertainties(const TranslationTrace& trace, const RenderedCode& rendered) {
  std::vector<LineUncertainty> out;
  out.reserve(rendered.line_tokens.size());
  std::vector<double> probs;
  for (std::size_t i = 0; i < rendered.line_tokens.size(); ++i) {
    const auto& indices = rendered.line_tokens[i];
    probs.clear();
    for (std::size_t idx : indices) probs.push_back(trace.tokens.at(idx).prob);
    const UncertaintyPair u = line_uncertainty(probs);
    out.push_back(LineUncertainty{trace.id, static_cast<int>(i + 1), u.joint, u.min_based,
                                  static_cast<int>(indices.size())});
  }
  return out;
}

std::vector<LineUncertainty> corpus_line_uncertainties(const Corpus& corpus,
                                                       const std::map<std::string, RenderedCode>& rendered) {
  std::vector<const TranslationTrace*> ordered;
  ordered.reserve(corpus.traces.size());
  for (const auto& t : corpus.traces) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

  std::vector<LineUncertainty> out;
  for (const TranslationTrace* trace : ordered) {
    auto it = rendered.find(trace->id);
    if (it == rendered.end()) throw MissingRendering(trace->id);
    auto lines = trace_line_uncertainties(*trace, it->second);
    out.insert(out.end(), std::make_move_iterator(lines.begin()), std::make_move_iterator(lines.end()));
  }
  return out;
}

std::string uncertainties_to_csv(const std::vector<LineUncertainty>& rows) {
  std::string out = "trace_id,line,token_count,joint,min\n";
  for (const auto& r : rows) {
    out += csv_field(r.trace_id);
    out += ',' + std::to_string(r.line) + ',' + std::to_string(r.token_count) + ',';
    out += format_shortest(r.joint) + ',' + format_shortest(r.min_based) + '\n';
  }
  return out;
}

}  // namespace ctqe
