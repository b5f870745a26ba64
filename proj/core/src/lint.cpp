#include "ctqe/lint.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <tuple>

#include "ctqe/subprocess.hpp"
#include "json.hpp"

namespace ctqe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string excerpt(std::string_view raw) {
  constexpr std::size_t kMax = 200;
  std::string out(raw.substr(0, kMax));
  if (raw.size() > kMax) out += "...";
  return out;
}

int optional_int(const json& msg, const char* key, int fallback) {
  auto it = msg.find(key);
  if (it == msg.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) throw OutputParseError(std::string("field \"") + key + "\" is not an integer", msg.dump());
  return it->get<int>();
}

std::string optional_string(const json& msg, const char* key) {
  auto it = msg.find(key);
  if (it == msg.end() || it->is_null()) return {};
  if (!it->is_string()) throw OutputParseError(std::string("field \"") + key + "\" is not a string", msg.dump());
  return it->get<std::string>();
}

LintFinding parse_message(const json& msg, std::string_view trace_id) {
  if (!msg.is_object()) throw OutputParseError("message is not an object", msg.dump());
  std::string code = optional_string(msg, "message-id");
  if (code.empty()) code = optional_string(msg, "messageId");
  if (code.empty()) throw OutputParseError("message without message-id", msg.dump());

  LintFinding f;
  try {
    f.category = parse_code_category(code);
  } catch (const UnknownCategory&) {
    throw OutputParseError("unrecognized message-id \"" + code + "\"", msg.dump());
  }
  f.code = std::move(code);
  f.symbol = optional_string(msg, "symbol");
  f.line = optional_int(msg, "line", 0);
  f.column = optional_int(msg, "column", 0);
  f.message = optional_string(msg, "message");
  f.trace_id = std::string(trace_id);
  return f;
}

}  // namespace

std::string_view to_string(LintCategory category) {
  switch (category) {
    case LintCategory::Error: return "error";
    case LintCategory::Refactor: return "refactor";
    case LintCategory::Warning: return "warning";
    case LintCategory::Convention: return "convention";
    case LintCategory::Fatal: return "fatal";
    case LintCategory::Info: return "info";
  }
  return "error";
}

char category_letter(LintCategory category) {
  switch (category) {
    case LintCategory::Error: return 'E';
    case LintCategory::Refactor: return 'R';
    case LintCategory::Warning: return 'W';
    case LintCategory::Convention: return 'C';
    case LintCategory::Fatal: return 'F';
    case LintCategory::Info: return 'I';
  }
  return 'E';
}

int category_rank(LintCategory category) {
  switch (category) {
    case LintCategory::Error: return 0;
    case LintCategory::Refactor: return 1;
    case LintCategory::Warning: return 2;
    case LintCategory::Convention: return 3;
    case LintCategory::Fatal: return 4;
    case LintCategory::Info: return 5;
  }
  return 6;
}

LintCategory parse_code_category(std::string_view code) {
  const bool well_formed = code.size() == 5 && std::all_of(code.begin() + 1, code.end(), [](unsigned char c) {
                             return std::isdigit(c) != 0;
                           });
  if (!well_formed) throw UnknownCategory(std::string(code));
  switch (code.front()) {
    case 'E': return LintCategory::Error;
    case 'R': return LintCategory::Refactor;
    case 'W': return LintCategory::Warning;
    case 'C': return LintCategory::Convention;
    case 'F': return LintCategory::Fatal;
    case 'I': return LintCategory::Info;
    default: throw UnknownCategory(std::string(code));
  }
}

bool finding_less(const LintFinding& a, const LintFinding& b) {
  return std::tie(a.line, a.column, a.code, a.symbol, a.message) <
         std::tie(b.line, b.column, b.code, b.symbol, b.message);
}

OutputParseError::OutputParseError(std::string reason, std::string raw_excerpt)
    : LintError("cannot parse linter output: " + reason + " [" + excerpt(raw_excerpt) + "]"),
      raw_excerpt_(excerpt(raw_excerpt)) {}

std::vector<LintFinding> parse_lint_output(std::string_view raw, std::string_view trace_id,
                                           const std::set<std::string>& ignored_codes) {
  if (raw.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw OutputParseError(e.what(), std::string(raw));
  }
  const json* messages = &doc;
  if (doc.is_object()) {
    auto it = doc.find("messages");
    if (it == doc.end() || !it->is_array()) throw OutputParseError("object without \"messages\" array", std::string(raw));
    messages = &*it;
  } else if (!doc.is_array()) {
    throw OutputParseError("expected an array of messages", std::string(raw));
  }

  std::vector<LintFinding> findings;
  for (const auto& msg : *messages) {
    LintFinding f = parse_message(msg, trace_id);
    if (ignored_codes.count(f.code) == 0) findings.push_back(std::move(f));
  }
  std::stable_sort(findings.begin(), findings.end(), finding_less);
  return findings;
}

std::string findings_to_lint_json(const std::vector<LintFinding>& findings, std::string_view path) {
  const std::string module = std::filesystem::path(path).stem().string();
  ordered_json arr = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json m;
    m["type"] = std::string(to_string(f.category));
    m["module"] = module;
    m["obj"] = "";
    m["line"] = f.line;
    m["column"] = f.column;
    m["path"] = std::string(path);
    m["symbol"] = f.symbol;
    m["message"] = f.message;
    m["message-id"] = f.code;
    arr.push_back(std::move(m));
  }
  return arr.dump(4) + "\n";
}

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> out;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (char c : command) {
    if (quote != 0) {
      if (c == quote)
        quote = 0;
      else
        current += c;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      if (in_token) out.push_back(std::move(current));
      current.clear();
      in_token = false;
    } else {
      current += c;
      in_token = true;
    }
  }
  if (in_token) out.push_back(std::move(current));
  return out;
}

LinterRun run_linter_raw(const std::filesystem::path& file, std::string_view trace_id, const LintConfig& config) {
  if (!std::filesystem::exists(file)) throw IoFailure("file to lint does not exist: " + file.string());
  std::vector<std::string> argv;
  bool substituted = false;
  for (const auto& arg : config.linter_command) {
    if (auto pos = arg.find("{file}"); pos != std::string::npos) {
      std::string replaced = arg;
      replaced.replace(pos, 6, file.string());
      argv.push_back(std::move(replaced));
      substituted = true;
    } else {
      argv.push_back(arg);
    }
  }
  if (!substituted) argv.push_back(file.string());

  ProcessResult proc = run_process(argv, config.timeout);
  if (proc.timed_out) throw LinterTimeout(file.string(), config.timeout);
  if (proc.stdout_data.find_first_not_of(" \t\r\n") == std::string::npos && proc.exit_status != 0)
    throw OutputParseError("no output, exit status " + std::to_string(proc.exit_status), "");

  LinterRun run;
  run.findings = parse_lint_output(proc.stdout_data, trace_id, config.ignored_codes);
  run.raw_output = std::move(proc.stdout_data);
  run.exit_status = proc.exit_status;
  return run;
}

std::vector<LintFinding> run_linter(const std::filesystem::path& file, std::string_view trace_id,
                                    const LintConfig& config) {
  return run_linter_raw(file, trace_id, config).findings;
}

LinterRun read_stub_lint(const std::filesystem::path& stub_dir, std::string_view file_stem,
                         std::string_view trace_id, const LintConfig& config) {
  const auto path = stub_dir / (std::string(file_stem) + ".lint.json");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LinterNotFound("stub output " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  LinterRun run;
  run.raw_output = buf.str();
  run.findings = parse_lint_output(run.raw_output, trace_id, config.ignored_codes);
  return run;
}

std::string linter_version(const LintConfig& config) {
  if (config.linter_command.empty()) return "unknown";
  try {
    ProcessResult proc = run_process({config.linter_command.front(), "--version"}, config.timeout);
    std::string_view out = proc.stdout_data;
    const auto end = out.find('\n');
    std::string first(out.substr(0, end));
    while (!first.empty() && std::isspace(static_cast<unsigned char>(first.back())) != 0) first.pop_back();
    return first.empty() ? "unknown" : first;
  } catch (const Error&) {
    return "unknown";
  }
}

std::size_t flag_out_of_range(std::vector<LintFinding>& findings, int line_count) {
  std::size_t marked = 0;
  for (auto& f : findings) {
    f.in_range = f.line >= 1 && f.line <= line_count;
    if (!f.in_range) ++marked;
  }
  return marked;
}

}  // namespace ctqe
