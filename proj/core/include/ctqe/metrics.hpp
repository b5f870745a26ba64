#pragma once

// Line-level uncertainty of a translation from its token probabilities:
//   joint = 1 - prod_t p_t      (joint distribution over the line's tokens)
//   min   = 1 - min_t  p_t      (least confident token)

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctqe/error.hpp"
#include "ctqe/render.hpp"
#include "ctqe/trace.hpp"

namespace ctqe {

enum class Metric { Joint, Min };

std::string_view to_string(Metric metric);  // "joint" / "min"

class UnknownMetric : public AnalysisError {
 public:
  explicit UnknownMetric(const std::string& name) : AnalysisError("unknown metric \"" + name + "\"") {}
};

Metric parse_metric(std::string_view name);

struct UncertaintyPair {
  double joint = 0.0;
  double min_based = 0.0;
};

struct LineUncertainty {
  std::string trace_id;
  int line = 1;
  double joint = 0.0;
  double min_based = 0.0;
  int token_count = 1;

  double value(Metric metric) const { return metric == Metric::Joint ? joint : min_based; }

  friend bool operator==(const LineUncertainty&, const LineUncertainty&) = default;
};

class EmptyLine : public AnalysisError {
 public:
  EmptyLine() : AnalysisError("line has no tokens") {}
};

class DomainError : public AnalysisError {
 public:
  explicit DomainError(double p);
};

class MissingRendering : public AnalysisError {
 public:
  explicit MissingRendering(const std::string& trace_id)
      : AnalysisError("no rendering for trace \"" + trace_id + "\"") {}
};

/// The product is accumulated as a compensated sum of logarithms (smallest
/// probability first) so long lines cannot underflow and the result does
/// not depend on token order.
UncertaintyPair line_uncertainty(std::span<const double> probs);

/// One entry per (trace, line), sorted by (trace_id, line). Every token the
/// renderer attributes to a line counts, control tokens included.
std::vector<LineUncertainty> corpus_line_uncertainties(const Corpus& corpus,
                                                       const std::map<std::string, RenderedCode>& rendered);

/// Per-line uncertainties of a single rendered trace, in line order.
std::vector<LineUncertainty> trace_line_uncertainties(const TranslationTrace& trace, const RenderedCode& rendered);

/// CSV dump with header `trace_id,line,token_count,joint,min`.
std::string uncertainties_to_csv(const std::vector<LineUncertainty>& rows);

}  // namespace ctqe
