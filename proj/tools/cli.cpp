#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ctqe/format.hpp"
#include "ctqe/lint.hpp"
#include "ctqe/metrics.hpp"
#include "ctqe/pipeline.hpp"
#include "ctqe/render.hpp"
#include "ctqe/report.hpp"
#include "ctqe/stats.hpp"
#include "ctqe/synth.hpp"
#include "ctqe/trace.hpp"
#include "ctqe/version.hpp"
#include "json.hpp"

namespace ctqe::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kLinterEnv = "CODETRANS_QE_LINTER";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Flags {
  std::string traces;
  std::string config;
  std::string linter_cmd;
  std::string ignore;
  std::string metric;
  double highlight_threshold = 0.0;
  double min_frequency = 0.0;
  std::string format;
  std::string out;
  int jobs = 0;
  std::string stub_lint;

  // synth
  std::string mode = "threshold";
  double tau = 0.5;
  int lines = 100;
  std::string code = "E0602";

  std::map<std::string, CLI::Option*> given;
  bool has(const std::string& name) const {
    auto it = given.find(name);
    return it != given.end() && it->second->count() > 0;
  }
};

struct RunConfig {
  std::string traces;
  LintConfig lint;
  std::string metric = "both";
  std::vector<Metric> metrics{Metric::Joint, Metric::Min};
  ReportConfig report;
  int jobs = 1;
  std::optional<std::filesystem::path> stub_lint;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> json_list(const json& value, const char* key) {
  if (value.is_string()) return split_list(value.get<std::string>());
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const auto& v : value) {
      if (!v.is_string()) throw UsageError(std::string("config \"") + key + "\" must contain strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }
  throw UsageError(std::string("config \"") + key + "\" must be a string or an array");
}

template <typename T>
T json_value(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config \"") + key + "\" has the wrong type");
  }
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Defaults < config file < environment (linter only) < flags.
RunConfig resolve_config(const Flags& flags) {
  json cfg = json::object();
  if (flags.has("--config")) {
    std::ifstream in(flags.config);
    if (!in) throw UsageError("cannot open config file " + flags.config);
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("invalid config file: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("config file must contain a JSON object");
    static const std::set<std::string> known{"traces",       "linter-cmd", "ignore", "metric",   "highlight-threshold",
                                             "min-frequency", "format",     "out",    "jobs",     "stub-lint"};
    for (const auto& [key, _] : cfg.items())
      if (known.count(key) == 0) throw UsageError("unknown config key \"" + key + "\"");
  }
  auto pick = [&](const char* flag) { return flags.has(std::string("--") + flag) ? 1 : (cfg.contains(flag) ? 2 : 0); };

  RunConfig rc;
  if (int s = pick("traces")) rc.traces = s == 1 ? flags.traces : json_value<std::string>(cfg, "traces");

  if (int s = pick("linter-cmd")) {
    rc.lint.linter_command = s == 1 ? split_command(flags.linter_cmd)
                                    : (cfg["linter-cmd"].is_array() ? json_list(cfg["linter-cmd"], "linter-cmd")
                                                                    : split_command(json_value<std::string>(cfg, "linter-cmd")));
  } else if (const char* env = std::getenv(kLinterEnv); env != nullptr && *env != '\0') {
    rc.lint.linter_command = split_command(env);
  }
  if (rc.lint.linter_command.empty()) throw UsageError("linter command is empty");

  if (int s = pick("ignore")) {
    const auto codes = s == 1 ? split_list(flags.ignore) : json_list(cfg["ignore"], "ignore");
    rc.lint.ignored_codes = std::set<std::string>(codes.begin(), codes.end());
  }

  if (int s = pick("metric")) rc.metric = s == 1 ? flags.metric : json_value<std::string>(cfg, "metric");
  if (rc.metric == "both")
    rc.metrics = {Metric::Joint, Metric::Min};
  else if (rc.metric == "joint" || rc.metric == "min")
    rc.metrics = {parse_metric(rc.metric)};
  else
    throw UsageError("--metric must be joint, min, or both");

  if (int s = pick("highlight-threshold"))
    rc.report.highlight_threshold =
        s == 1 ? flags.highlight_threshold : json_value<double>(cfg, "highlight-threshold");
  if (!(rc.report.highlight_threshold > 0.0 && rc.report.highlight_threshold <= 1.0))
    throw UsageError("--highlight-threshold must lie in (0, 1]");

  if (int s = pick("min-frequency"))
    rc.report.min_frequency = s == 1 ? flags.min_frequency : json_value<double>(cfg, "min-frequency");
  if (!(rc.report.min_frequency >= 0.0 && rc.report.min_frequency <= 1.0))
    throw UsageError("--min-frequency must lie in [0, 1]");

  if (int s = pick("format")) {
    const auto names = s == 1 ? split_list(flags.format) : json_list(cfg["format"], "format");
    rc.report.formats.clear();
    try {
      for (const auto& name : names) rc.report.formats.insert(parse_report_format(name));
    } catch (const ReportError& e) {
      throw UsageError(e.what());
    }
  }

  rc.report.output_dir = "ctqe-out";
  if (int s = pick("out")) rc.report.output_dir = s == 1 ? flags.out : json_value<std::string>(cfg, "out");

  rc.jobs = default_jobs();
  if (int s = pick("jobs")) rc.jobs = s == 1 ? flags.jobs : json_value<int>(cfg, "jobs");
  if (rc.jobs < 1) throw UsageError("--jobs must be positive");

  if (int s = pick("stub-lint"))
    rc.stub_lint = std::filesystem::path(s == 1 ? flags.stub_lint : json_value<std::string>(cfg, "stub-lint"));
  return rc;
}

Corpus load_corpus(const RunConfig& rc) {
  if (rc.traces.empty()) throw UsageError("--traces is required");
  try {
    return load_traces(rc.traces);
  } catch (const IoFailure& e) {
    throw TraceError(e.what());
  }
}

std::string findings_to_json(const FindingsMap& findings) {
  ordered_json arr = ordered_json::array();
  for (const auto& [trace_id, fs] : findings) {
    for (const auto& f : fs) {
      ordered_json j;
      j["trace_id"] = f.trace_id;
      j["code"] = f.code;
      j["category"] = std::string(to_string(f.category));
      j["symbol"] = f.symbol;
      j["line"] = f.line;
      j["column"] = f.column;
      j["message"] = f.message;
      j["in_range"] = f.in_range;
      arr.push_back(std::move(j));
    }
  }
  return arr.dump(2) + "\n";
}

/// Effective configuration. The worker count is left out so that the
/// manifest, like every other artifact, is independent of parallelism.
std::string manifest_json(const RunConfig& rc, std::string_view command, const std::string& linter_version,
                          std::size_t trace_count) {
  ordered_json cfg;
  cfg["traces"] = rc.traces;
  cfg["linter-cmd"] = rc.lint.linter_command;
  cfg["ignore"] = std::vector<std::string>(rc.lint.ignored_codes.begin(), rc.lint.ignored_codes.end());
  cfg["timeout-seconds"] = rc.lint.timeout.count();
  cfg["metric"] = rc.metric;
  cfg["highlight-threshold"] = rc.report.highlight_threshold;
  cfg["min-frequency"] = rc.report.min_frequency;
  std::vector<std::string> formats;
  for (ReportFormat f : rc.report.formats) formats.emplace_back(to_string(f));
  cfg["format"] = formats;
  cfg["out"] = rc.report.output_dir.string();
  cfg["stub-lint"] = rc.stub_lint ? ordered_json(rc.stub_lint->string()) : ordered_json(nullptr);

  ordered_json m;
  m["tool"] = kToolName;
  m["tool_version"] = kVersion;
  m["command"] = std::string(command);
  m["linter_version"] = linter_version;
  m["trace_count"] = trace_count;
  m["config"] = std::move(cfg);
  return m.dump(2) + "\n";
}

LintStageConfig lint_stage(const RunConfig& rc) {
  LintStageConfig ls;
  ls.lint = rc.lint;
  ls.stub_dir = rc.stub_lint;
  ls.work_dir = rc.report.output_dir;
  ls.jobs = rc.jobs;
  return ls;
}

void emit_warnings(const LintStageResult& lint, std::ostream& err) {
  for (const auto& w : lint.warnings) err << "ctqe: warning: " << w << '\n';
}

int cmd_validate(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_corpus(rc);
  std::size_t tokens = 0;
  for (const auto& t : corpus.traces) {
    tokens += t.tokens.size();
    render(t);  // Dedent underflow surfaces here as well
  }
  out << "ok: " << corpus.traces.size() << " traces, " << tokens << " tokens\n";
  return kSuccess;
}

int cmd_render(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_corpus(rc);
  const RenderMap rendered = render_corpus(corpus, rc.jobs);
  write_rendered(corpus, rendered, rc.report.output_dir, rc.jobs);
  out << "rendered " << corpus.traces.size() << " traces to " << rc.report.output_dir.string() << '\n';
  return kSuccess;
}

int cmd_lint(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(rc);
  const RenderMap rendered = render_corpus(corpus, rc.jobs);
  const LintStageResult lint = lint_corpus(corpus, rendered, lint_stage(rc));
  emit_warnings(lint, err);
  write_file(rc.report.output_dir / "findings.json", findings_to_json(lint.findings));
  std::size_t n = 0;
  for (const auto& [_, fs] : lint.findings) n += fs.size();
  out << "linted " << corpus.traces.size() << " traces: " << n << " findings\n";
  return kSuccess;
}

int cmd_analyze(const RunConfig& rc, std::string_view command, bool annotate, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(rc);
  const Analysis analysis = analyze_corpus(corpus, lint_stage(rc), rc.metrics);
  emit_warnings(analysis.lint, err);

  const auto& dir = rc.report.output_dir;
  write_file(dir / "findings.json", findings_to_json(analysis.lint.findings));
  if (rc.report.wants(ReportFormat::Csv)) write_file(dir / "uncertainties.csv", uncertainties_to_csv(analysis.uncertainties));
  emit_correlation_report(analysis.correlations, rc.report);
  try {
    emit_frequency_chart(analysis.frequencies, rc.report);
  } catch (const EmptyReport& e) {
    err << "ctqe: note: " << e.what() << "; frequencies.csv written without a chart\n";
  }

  if (annotate) {
    std::map<std::string, std::vector<LineUncertainty>> by_trace;
    for (const auto& u : analysis.uncertainties) by_trace[u.trace_id].push_back(u);
    parallel_for(corpus.traces.size(), rc.jobs, [&](std::size_t i) {
      const auto& trace = corpus.traces[i];
      emit_annotated_code(trace, analysis.rendered.at(trace.id), analysis.lint.findings.at(trace.id),
                          by_trace[trace.id], rc.report);
    });
  }

  const std::string version = rc.stub_lint ? "stub (recorded output)" : linter_version(rc.lint);
  write_file(dir / "run-manifest.json", manifest_json(rc, command, version, corpus.traces.size()));

  std::size_t defined = 0;
  for (const auto& row : analysis.correlations) defined += row.r ? 1 : 0;
  out << "analyzed " << corpus.traces.size() << " traces, " << analysis.uncertainties.size() << " lines: "
      << defined << " of " << analysis.correlations.size() << " correlations defined\n";
  if (!analysis.has_defined_correlation()) {
    err << "ctqe: error: no computable correlation (every lint code is degenerate)\n";
    return kDegenerate;
  }
  return kSuccess;
}

int cmd_synth(const Flags& flags, const RunConfig& rc, std::ostream& out) {
  SynthSpec spec;
  spec.n_lines = flags.lines;
  spec.code = flags.code;
  if (flags.mode == "threshold")
    spec.mode = GridThreshold{flags.tau};
  else if (flags.mode == "alternating")
    spec.mode = GridAlternating{};
  else
    throw UsageError("--mode must be threshold or alternating");

  SynthOutput synth;
  try {
    synth = generate(spec);
  } catch (const InvalidSpec& e) {
    throw UsageError(e.what());
  }
  const auto& dir = rc.report.output_dir;
  std::ostringstream traces;
  write_traces(traces, synth.corpus);
  write_file(dir / "traces.jsonl", traces.str());
  const auto& trace = synth.corpus.traces.front();
  const std::string stem = file_stem_for_id(trace.id);
  write_file(dir / "lint" / (stem + ".lint.json"),
             findings_to_lint_json(synth.findings, (std::filesystem::path("rendered") / rendered_file_name(trace)).string()));
  out << "wrote " << (dir / "traces.jsonl").string() << " and " << (dir / "lint").string() << "/" << stem
      << ".lint.json (" << synth.findings.size() << " findings)\n";
  return kSuccess;
}

void add_common(CLI::App* sub, Flags& f, bool with_lint, bool with_report) {
  sub->add_option("--traces", f.traces, "Trace file (newline-delimited JSON)");
  sub->add_option("--config", f.config, "JSON config file mirroring flag names");
  sub->add_option("--out", f.out, "Output directory (default ctqe-out)");
  sub->add_option("--jobs", f.jobs, "Parallel workers (default: logical CPUs)");
  if (with_lint) {
    sub->add_option("--linter-cmd", f.linter_cmd, "Linter command; {file} is replaced by the file path");
    sub->add_option("--ignore", f.ignore, "Comma-separated codes to drop");
    sub->add_option("--stub-lint", f.stub_lint, "Directory of recorded <id>.lint.json");
  }
  if (with_report) {
    sub->add_option("--metric", f.metric, "joint|min|both");
    sub->add_option("--highlight-threshold", f.highlight_threshold,
                                                       "Highlight tokens with p below this (default 0.95)");
    sub->add_option("--min-frequency", f.min_frequency,
                                                 "Chart entries with fraction above this (default 0.05)");
    sub->add_option("--format", f.format, "Comma list of csv,json,md,html,ansi,svg");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ctqe: quality estimation for machine-translated code from token confidences and lint findings",
               "ctqe"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  Flags flags;
  auto* validate = app.add_subcommand("validate", "Ingest and validate traces");
  auto* render_cmd = app.add_subcommand("render", "Write rendered target code, one file per trace");
  auto* lint = app.add_subcommand("lint", "Render and lint; write findings.json and raw linter output");
  auto* analyze = app.add_subcommand("analyze", "Full pipeline; write correlation and frequency artifacts");
  auto* report = app.add_subcommand("report", "analyze plus annotated per-trace code documents");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic oracle corpus and its stub lint output");

  add_common(validate, flags, false, false);
  add_common(render_cmd, flags, false, false);
  add_common(lint, flags, true, false);
  add_common(analyze, flags, true, true);
  add_common(report, flags, true, true);
  synth->add_option("--mode", flags.mode, "threshold|alternating")->capture_default_str();
  synth->add_option("--tau", flags.tau, "Threshold for threshold mode")->capture_default_str();
  synth->add_option("--lines", flags.lines, "Number of lines")->capture_default_str();
  synth->add_option("--code", flags.code, "Lint code to inject")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  // Options share storage across subcommands; record which one was parsed.
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> per_sub;
  for (auto* sub : {validate, render_cmd, lint, analyze, report}) {
    for (const auto* opt : sub->get_options()) {
      const std::string name = opt->get_name();
      if (name.rfind("--", 0) == 0) per_sub[sub][name] = const_cast<CLI::Option*>(opt);
    }
  }
  std::string synth_out;
  auto* synth_out_opt = synth->add_option("--out", synth_out, "Output directory (default ctqe-out)");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "ctqe: error: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen == synth) {
      RunConfig rc;
      rc.report.output_dir = synth_out_opt->count() > 0 ? synth_out : "ctqe-out";
      return cmd_synth(flags, rc, out);
    }
    flags.given = per_sub[chosen];
    const RunConfig rc = resolve_config(flags);
    if (chosen == validate) return cmd_validate(rc, out);
    if (chosen == render_cmd) return cmd_render(rc, out);
    if (chosen == lint) return cmd_lint(rc, out, err);
    if (chosen == analyze) return cmd_analyze(rc, "analyze", false, out, err);
    return cmd_analyze(rc, "report", true, out, err);
  } catch (const UsageError& e) {
    err << "ctqe: error: " << e.what() << '\n';
    return kUsageError;
  } catch (const TraceError& e) {
    err << "ctqe: error: " << e.what() << '\n';
    return kTraceError;
  } catch (const LintError& e) {
    err << "ctqe: error: " << e.what() << '\n';
    return kLinterError;
  } catch (const std::exception& e) {
    err << "ctqe: error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace ctqe::cli
