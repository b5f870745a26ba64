#pragma once

// Deterministic synthetic corpora with a known coupling between line
// uncertainty and injected lint findings.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ctqe/error.hpp"
#include "ctqe/lint.hpp"
#include "ctqe/trace.hpp"

namespace ctqe {

struct GridThreshold {
  double tau = 0.5;
};
struct GridAlternating {};

struct SynthSpec {
  int n_lines = 100;
  std::variant<GridThreshold, GridAlternating> mode = GridThreshold{};
  std::string code = "E0602";
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

struct SynthOutput {
  Corpus corpus;
  std::vector<LintFinding> findings;
};

/// One trace of n_lines lines. Line i (0-based) is a single Word with
/// p = 1 - (i + 0.5) / n_lines followed by a Newline with p = 1, so both
/// uncertainty metrics equal u_i = (i + 0.5) / n_lines. GridThreshold
/// injects `code` on lines with u_i >= tau, GridAlternating on even i.
SynthOutput generate(const SynthSpec& spec);

/// Trace id used for a spec ("synth-threshold-<tau>-<n>" or
/// "synth-alternating-<n>").
std::string synth_trace_id(const SynthSpec& spec);

}  // namespace ctqe
