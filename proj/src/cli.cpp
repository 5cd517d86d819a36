#include "stutter/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "stutter/agreement.hpp"
#include "stutter/json_io.hpp"
#include "stutter/textgrid.hpp"
#include "stutter/unicode.hpp"

namespace stutter::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for inputs that exist but do not parse; maps to exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InputKind { Text, TextGrid, Json, Labels };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

InputKind detect_kind(const std::string& path, const std::string& override_format) {
  std::string ext = override_format;
  if (ext.empty()) ext = unicode::fold_case(fs::path(path).extension().string());
  if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
  if (ext == "textgrid") return InputKind::TextGrid;
  if (ext == "json") return InputKind::Json;
  if (ext == "csv") return InputKind::Labels;
  return InputKind::Text;
}

struct Loaded {
  Transcript transcript;
  std::vector<Diagnostic> warnings;
  InputKind kind = InputKind::Text;
  std::vector<std::size_t> interval_of_segment;
};

struct ParseFailure {
  std::vector<Diagnostic> errors;
  std::string message;
  bool by_interval = false;
};

std::variant<Loaded, ParseFailure> load(const std::string& path, InputKind kind,
                                        const std::string& tier) {
  const std::string bytes = read_file(path);
  Loaded loaded;
  loaded.kind = kind;
  switch (kind) {
    case InputKind::Text:
    case InputKind::Labels: {
      ParseResult parsed = parse(bytes);
      if (!parsed.ok()) return ParseFailure{std::move(parsed.diagnostics), {}};
      loaded.transcript = std::move(*parsed.transcript);
      loaded.warnings = std::move(parsed.diagnostics);
      break;
    }
    case InputKind::Json: {
      try {
        loaded.transcript = transcript_from_json(std::string_view(bytes));
      } catch (const JsonFormatError& e) {
        return ParseFailure{{}, e.what()};
      }
      break;
    }
    case InputKind::TextGrid: {
      try {
        textgrid::ImportResult imported =
            textgrid::import_transcript_lenient(textgrid::read(bytes), tier);
        if (!imported.errors.empty()) return ParseFailure{std::move(imported.errors), {}, true};
        loaded.transcript = std::move(imported.transcript);
        loaded.warnings = std::move(imported.warnings);
        loaded.interval_of_segment = std::move(imported.interval_of_segment);
      } catch (const textgrid::TextGridError& e) {
        if (e.kind() == textgrid::TextGridError::Kind::TierNotFound) throw;
        return ParseFailure{{}, e.what()};
      }
      break;
    }
  }
  loaded.transcript.source_name = path;
  return loaded;
}

std::string location(const std::string& path, InputKind kind, const Diagnostic& d,
                     const std::vector<std::size_t>& interval_of_segment) {
  const std::string col = std::to_string(d.span.begin + 1);
  switch (kind) {
    case InputKind::TextGrid: {
      const std::size_t interval = d.segment < interval_of_segment.size()
                                       ? interval_of_segment[d.segment] + 1
                                       : d.segment + 1;
      return path + ":interval " + std::to_string(interval) + ":" + col;
    }
    case InputKind::Json: return path + ":segment " + std::to_string(d.segment + 1) + ":" + col;
    default: return path + ":" + std::to_string(d.segment + 1) + ":" + col;
  }
}

std::string format_diagnostic(const std::string& where, const Diagnostic& d) {
  return where + ": " + std::string(to_string(d.severity)) + "[" + d.rule_id + "]: " + d.message +
         "\n";
}

struct Context {
  CliConfig config;
  std::string input_format;
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------- lint ----

struct LintReport {
  std::string text;
  json entry;
  int exit = kExitClean;
};

LintReport lint_one(const std::string& path, const Context& ctx, bool quiet_warnings) {
  LintReport report;
  report.entry = {{"path", path}, {"diagnostics", json::array()}};
  const InputKind kind = detect_kind(path, ctx.input_format);
  std::variant<Loaded, ParseFailure> loaded;
  try {
    loaded = load(path, kind, ctx.config.tier);
  } catch (const IoError& e) {
    report.text = path + ": error: " + e.what() + "\n";
    report.entry["failure"] = e.what();
    report.exit = kExitFailure;
    return report;
  } catch (const textgrid::TextGridError& e) {
    report.text = path + ": error: " + e.what() + "\n";
    report.entry["failure"] = e.what();
    report.exit = kExitFailure;
    return report;
  }

  std::vector<Diagnostic> diagnostics;
  std::vector<std::size_t> intervals;
  if (auto* failure = std::get_if<ParseFailure>(&loaded)) {
    report.exit = kExitErrors;
    if (!failure->message.empty()) {
      report.text += path + ": error: " + failure->message + "\n";
      report.entry["failure"] = failure->message;
    }
    diagnostics = std::move(failure->errors);
  } else {
    const Loaded& ok = std::get<Loaded>(loaded);
    intervals = ok.interval_of_segment;
    diagnostics = validate(ok.transcript, ctx.config.rules);
  }

  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::Warning) {
      if (quiet_warnings) continue;
      report.exit = std::max(report.exit, kExitWarnings);
    }
    report.text += format_diagnostic(location(path, kind, d, intervals), d);
    report.entry["diagnostics"].push_back(to_json(d));
  }
  return report;
}

int cmd_lint(const Context& ctx, const std::vector<std::string>& paths, bool quiet_warnings) {
  std::vector<std::future<LintReport>> pending;
  pending.reserve(paths.size());
  for (const std::string& path : paths) {
    pending.push_back(std::async(std::launch::async, [&ctx, path, quiet_warnings] {
      return lint_one(path, ctx, quiet_warnings);
    }));
  }
  int exit = kExitClean;
  json files = json::array();
  for (auto& future : pending) {
    LintReport report = future.get();
    exit = std::max(exit, report.exit);
    if (ctx.config.format == OutputFormat::Json) {
      files.push_back(std::move(report.entry));
    } else {
      ctx.out << report.text;
    }
  }
  if (ctx.config.format == OutputFormat::Json) ctx.out << json{{"files", files}}.dump(2) << "\n";
  return exit;
}

int cmd_explain(const Context& ctx, const std::string& rule_id) {
  const RuleInfo* rule = find_rule(rule_id);
  if (!rule) {
    ctx.err << "stutter-annot: unknown rule id '" << rule_id << "'\n";
    return kExitFailure;
  }
  ctx.out << rule->id << " (" << to_string(rule->severity) << "): " << rule->summary << "\n\n"
          << rule->guideline << "\n";
  return kExitClean;
}

// Shared by convert/diff: loads one transcript or reports why not.
std::optional<Loaded> load_or_report(const Context& ctx, const std::string& path, int& exit) {
  const InputKind kind = detect_kind(path, ctx.input_format);
  auto loaded = load(path, kind, ctx.config.tier);
  if (auto* failure = std::get_if<ParseFailure>(&loaded)) {
    if (!failure->message.empty()) ctx.err << path << ": error: " << failure->message << "\n";
    for (const Diagnostic& d : failure->errors) {
      ctx.err << format_diagnostic(location(path, kind, d, {}), d);
    }
    exit = kExitErrors;
    return std::nullopt;
  }
  return std::get<Loaded>(std::move(loaded));
}

// -------------------------------------------------------------- convert ----

int cmd_convert(const Context& ctx, const std::string& path, const std::string& to, bool redacted) {
  int exit = kExitClean;
  auto loaded = load_or_report(ctx, path, exit);
  if (!loaded) return exit;
  Transcript t = std::move(loaded->transcript);
  if (redacted) t = redact(t, ctx.config.redaction);

  if (to == "verbatim" || to == "semantic") {
    for (const std::string& line : to == "verbatim" ? to_verbatim(t) : to_semantic(t)) {
      ctx.out << line << "\n";
    }
  } else if (to == "events") {
    const auto events = extract_events(t);
    ctx.out << (ctx.config.format == OutputFormat::Json ? events_to_json_lines(events)
                                                        : events_to_csv(events));
  } else if (to == "markup") {
    ctx.out << serialize(t);
    if (!t.segments.empty() && !serialize(t).ends_with('\n')) ctx.out << "\n";
  } else {
    ctx.out << to_json(t).dump(2) << "\n";
  }
  return kExitClean;
}

// ----------------------------------------------------------------- diff ----

int cmd_diff(const Context& ctx, const std::string& path_a, const std::string& path_b) {
  int exit = kExitClean;
  auto a = load_or_report(ctx, path_a, exit);
  auto b = load_or_report(ctx, path_b, exit);
  if (!a || !b) return kExitErrors;

  const DiffReport report = diff(a->transcript, b->transcript);
  if (ctx.config.format == OutputFormat::Json) {
    json entries = json::array();
    for (const DiffEntry& e : report.entries) {
      json codes = json::array();
      for (EventCode code : e.differing_codes) codes.push_back(name(code));
      entries.push_back({{"position", e.position},
                         {"a", e.a_token ? json(e.a_markup) : json(nullptr)},
                         {"b", e.b_token ? json(e.b_markup) : json(nullptr)},
                         {"differing_codes", codes}});
    }
    ctx.out << json{{"a", path_a}, {"b", path_b}, {"entries", entries}}.dump(2) << "\n";
  } else if (!report.empty()) {
    ctx.out << "--- " << path_a << "\n+++ " << path_b << "\n" << render_diff(report);
  }
  return report.empty() ? kExitClean : kExitWarnings;
}

// ---------------------------------------------------------------- agree ----

inline constexpr std::string_view kLabelsHeader =
    "segment,block,prolongation,sound_repetition,word_repetition,interjection";

std::vector<ClipLabels> read_label_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty label file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLabelsHeader) {
    throw InputError(path + ": expected header \"" + std::string(kLabelsHeader) + "\"");
  }
  std::vector<ClipLabels> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string field; std::getline(row, field, ',');) fields.push_back(field);
    if (fields.size() != 6) throw InputError(path + ":" + std::to_string(line_no) + ": expected 6 fields");
    ClipLabels clip;
    clip.segment_index = labels.size();
    for (std::size_t k = 0; k < 5; ++k) {
      if (fields[k + 1] != "0" && fields[k + 1] != "1") {
        throw InputError(path + ":" + std::to_string(line_no) + ": labels must be 0 or 1");
      }
      clip.flags[k] = fields[k + 1] == "1";
    }
    labels.push_back(clip);
  }
  return labels;
}

std::string write_label_csv(const std::vector<ClipLabels>& labels) {
  std::string out = std::string(kLabelsHeader) + "\n";
  for (const ClipLabels& clip : labels) {
    out += std::to_string(clip.segment_index);
    for (bool flag : clip.flags) out += flag ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::string format_kappa(const std::optional<double>& kappa) {
  if (!kappa) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *kappa);
  return buf;
}

int cmd_agree(const Context& ctx, const std::vector<std::string>& paths, std::string metric,
              const std::string& majority_path) {
  if (paths.size() < 2) {
    ctx.err << "stutter-annot: agree needs at least two inputs\n";
    return kExitFailure;
  }
  std::vector<std::vector<ClipLabels>> sets;
  for (const std::string& path : paths) {
    const InputKind kind = detect_kind(path, ctx.input_format);
    if (kind == InputKind::Labels) {
      sets.push_back(read_label_csv(path));
      continue;
    }
    int exit = kExitClean;
    auto loaded = load_or_report(ctx, path, exit);
    if (!loaded) return exit;
    sets.push_back(clip_labels(loaded->transcript));
  }
  const std::size_t clips = sets.front().size();
  for (std::size_t k = 1; k < sets.size(); ++k) {
    if (sets[k].size() != clips) {
      ctx.err << "stutter-annot: " << paths[k] << " has " << sets[k].size() << " segments but "
              << paths.front() << " has " << clips << "\n";
      return kExitFailure;
    }
  }
  if (clips == 0) {
    ctx.err << "stutter-annot: inputs contain no segments\n";
    return kExitFailure;
  }
  if (metric.empty()) metric = sets.size() == 2 ? "cohen" : "fleiss";
  if (metric == "cohen" && sets.size() != 2) {
    ctx.err << "stutter-annot: cohen kappa compares exactly two annotators; use --metric fleiss\n";
    return kExitFailure;
  }

  std::map<EventCode, std::optional<double>> kappas;
  for (EventCode code : kAllEventCodes) {
    if (metric == "cohen") {
      kappas[code] = cohen_kappa(label_column(sets[0], code), label_column(sets[1], code));
    } else {
      std::vector<std::vector<std::size_t>> counts(clips, std::vector<std::size_t>(2, 0));
      for (const auto& set : sets) {
        for (std::size_t i = 0; i < clips; ++i) ++counts[i][set[i].has(code) ? 1 : 0];
      }
      kappas[code] = fleiss_kappa(counts, sets.size());
    }
  }
  std::optional<ConfusionTable> table;
  if (sets.size() == 2) table = confusion(sets[0], sets[1]);

  if (!majority_path.empty()) {
    std::vector<LabelVector> columns_by_code[5];
    std::vector<ClipLabels> voted(clips);
    for (std::size_t i = 0; i < clips; ++i) voted[i].segment_index = i;
    try {
      for (EventCode code : kAllEventCodes) {
        std::vector<LabelVector> votes;
        for (const auto& set : sets) votes.push_back(label_column(set, code));
        const LabelVector result = majority_vote(votes);
        for (std::size_t i = 0; i < clips; ++i) voted[i].flags[index_of(code)] = result[i] != 0;
      }
    } catch (const AgreementError& e) {
      ctx.err << "stutter-annot: " << e.what() << "\n";
      return kExitFailure;
    }
    write_file(majority_path, write_label_csv(voted));
  }

  const std::string statistic = metric == "cohen" ? "cohen_kappa" : "fleiss_kappa";
  if (ctx.config.format == OutputFormat::Json) {
    json kappa_json = json::object();
    for (EventCode code : kReportOrder) {
      kappa_json[std::string(name(code))] = kappas[code] ? json(*kappas[code]) : json(nullptr);
    }
    json report = {{"statistic", statistic},
                   {"annotators", sets.size()},
                   {"clips", clips},
                   {"kappa", kappa_json},
                   {"confusion", nullptr}};
    if (table) {
      json rows = json::array();
      for (EventCode code : kReportOrder) {
        const ConfusionCell& cell = (*table)[code];
        rows.push_back({{"code", name(code)},
                        {"tp", cell.tp},
                        {"fp", cell.fp},
                        {"fn", cell.fn},
                        {"tn", cell.tn},
                        {"total", cell.disagreements()},
                        {"percentage", format_percentage(table->percentage_hundredths(code))}});
      }
      report["confusion"] = {{"reference", paths[0]}, {"candidate", paths[1]}, {"rows", rows}};
    }
    ctx.out << report.dump(2) << "\n";
  } else if (ctx.config.format == OutputFormat::Csv) {
    ctx.out << "code,statistic,kappa\n";
    for (EventCode code : kReportOrder) {
      ctx.out << name(code) << "," << statistic << ","
              << (kappas[code] ? format_kappa(kappas[code]) : "") << "\n";
    }
    if (table) ctx.out << "\n" << render_confusion_csv(*table);
  } else {
    ctx.out << "statistic: " << statistic << " (" << sets.size() << " annotators, " << clips
            << " clips)\n";
    for (EventCode code : kReportOrder) {
      std::string label(name(code));
      std::replace(label.begin(), label.end(), '_', ' ');
      label.resize(std::max<std::size_t>(label.size(), 18), ' ');
      ctx.out << label << format_kappa(kappas[code]) << "\n";
    }
    if (table) {
      ctx.out << "\nreference: " << paths[0] << "\ncandidate: " << paths[1] << "\n"
              << render_confusion_text(*table);
    }
  }
  return kExitClean;
}

// ------------------------------------------------------------- textgrid ----

std::string sidecar_text(const Transcript& t, TimeRange range) {
  std::string out = "range\t" + textgrid::format_number(range.start) + "\t" +
                    textgrid::format_number(range.end) + "\n";
  for (const Segment& s : t.segments) {
    out += textgrid::format_number(s.time_range->start) + "\t" +
           textgrid::format_number(s.time_range->end) + "\n";
  }
  return out;
}

double parse_seconds(std::string_view text, const std::string& where) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(where + ": expected a number, got \"" + std::string(text) + "\"");
  }
  return value;
}

// Returns the document range and assigns time ranges to segments in order.
TimeRange apply_sidecar(Transcript& t, const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string line;
  std::optional<TimeRange> range;
  std::size_t segment = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string field; std::getline(row, field, '\t');) fields.push_back(field);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() == 3 && fields[0] == "range") {
      range = TimeRange{parse_seconds(fields[1], where), parse_seconds(fields[2], where)};
      continue;
    }
    if (fields.size() != 2) throw InputError(where + ": expected \"start<TAB>end\"");
    if (segment >= t.segments.size()) throw InputError(where + ": more timestamps than segments");
    const TimeRange tr{parse_seconds(fields[0], where), parse_seconds(fields[1], where)};
    if (!(tr.start >= 0 && tr.start < tr.end)) throw InputError(where + ": need 0 <= start < end");
    t.segments[segment++].time_range = tr;
  }
  if (segment != t.segments.size()) {
    throw InputError(path + ": " + std::to_string(t.segments.size()) + " segments but " +
                     std::to_string(segment) + " timestamps");
  }
  if (!range) {
    range = TimeRange{0.0, 0.0};
    for (const Segment& s : t.segments) range->end = std::max(range->end, s.time_range->end);
  }
  return *range;
}

int textgrid_exit(const textgrid::TextGridError& e) {
  using Kind = textgrid::TextGridError::Kind;
  switch (e.kind()) {
    case Kind::TierNotFound:
    case Kind::NonPositiveThreshold: return kExitFailure;
    default: return kExitErrors;
  }
}

int cmd_textgrid_import(const Context& ctx, const std::string& path, const std::string& output) {
  const textgrid::Document doc = textgrid::read(read_file(path));
  const textgrid::ImportResult imported = textgrid::import_transcript(doc, ctx.config.tier);
  std::string markup = serialize(imported.transcript);
  if (!imported.transcript.segments.empty() && !markup.ends_with('\n')) markup.push_back('\n');
  const TimeRange range{doc.xmin, doc.xmax};
  if (output.empty()) {
    ctx.out << markup;
  } else {
    write_file(output, markup);
    write_file(output + ".times", sidecar_text(imported.transcript, range));
  }
  for (const Diagnostic& d : imported.warnings) {
    ctx.err << format_diagnostic(location(path, InputKind::TextGrid, d, imported.interval_of_segment), d);
  }
  return kExitClean;
}

int cmd_textgrid_export(const Context& ctx, const std::string& path, std::string times,
                        const std::string& output, std::optional<double> xmin,
                        std::optional<double> xmax) {
  ParseResult parsed = parse(read_file(path));
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics) {
      ctx.err << format_diagnostic(location(path, InputKind::Text, d, {}), d);
    }
    return kExitErrors;
  }
  Transcript t = std::move(*parsed.transcript);
  if (times.empty()) times = path + ".times";
  TimeRange range = apply_sidecar(t, read_file(times), times);
  if (xmin) range.start = *xmin;
  if (xmax) range.end = *xmax;
  const std::string bytes = textgrid::write(textgrid::export_transcript(t, range));
  if (output.empty()) {
    ctx.out << bytes;
  } else {
    write_file(output, bytes);
  }
  return kExitClean;
}

int cmd_textgrid_gaplint(const Context& ctx, const std::string& path) {
  const textgrid::Document doc = textgrid::read(read_file(path));
  const auto findings = textgrid::gap_lint(doc, ctx.config.tier, ctx.config.gap_threshold);
  if (ctx.config.format == OutputFormat::Json) {
    json list = json::array();
    for (const auto& f : findings) {
      list.push_back({{"tier", f.tier},
                      {"xmin", f.xmin},
                      {"xmax", f.xmax},
                      {"duration", f.duration},
                      {"previous_text", f.previous_text},
                      {"next_text", f.next_text}});
    }
    ctx.out << json{{"path", path}, {"threshold", ctx.config.gap_threshold}, {"findings", list}}.dump(2)
            << "\n";
  } else if (ctx.config.format == OutputFormat::Csv) {
    ctx.out << "tier,xmin,xmax,duration\n";
    for (const auto& f : findings) {
      ctx.out << f.tier << "," << textgrid::format_number(f.xmin) << ","
              << textgrid::format_number(f.xmax) << "," << textgrid::format_number(f.duration)
              << "\n";
    }
  } else {
    for (const auto& f : findings) {
      ctx.out << path << ": tier \"" << f.tier << "\": silent span " << textgrid::format_number(f.xmin)
              << "-" << textgrid::format_number(f.xmax) << " s ("
              << textgrid::format_number(f.duration) << " s) between \"" << f.previous_text
              << "\" and \"" << f.next_text
              << "\"; listen for unannotated blocks or prolongations\n";
    }
  }
  return findings.empty() ? kExitClean : kExitWarnings;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parse, lint, convert and compare stuttered-speech annotation transcripts",
               "stutter-annot"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string format;
  std::string input_format;
  std::string tier;
  std::vector<std::string> rule_flags;
  std::optional<double> threshold;
  app.add_option("--config", config_path, "Flat key = value config file (default: $STUTTER_ANNOT_CONFIG)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--input-format", input_format, "Override extension-based input dispatch")
      ->check(CLI::IsMember({"txt", "textgrid", "json", "csv"}));
  app.add_option("--tier", tier, "TextGrid tier holding the annotation");
  app.add_option("--rule", rule_flags, "Toggle a lint rule: ID=on or ID=off")->allow_extra_args(false);

  auto* lint = app.add_subcommand("lint", "Check annotation files against the markup rules");
  std::vector<std::string> lint_paths;
  std::string explain;
  bool quiet_warnings = false;
  lint->add_option("paths", lint_paths, "Annotation files (.txt, .TextGrid, .json)");
  lint->add_option("--explain", explain, "Print the annotation convention behind a rule");
  lint->add_flag("--quiet-warnings", quiet_warnings, "Suppress warnings; exit 0 unless errors");

  auto* convert = app.add_subcommand("convert", "Render a transcript in another form");
  std::string convert_path;
  std::string convert_to = "verbatim";
  bool redacted = false;
  convert->add_option("path", convert_path, "Input file")->required();
  convert->add_option("--to", convert_to, "Target rendering")
      ->check(CLI::IsMember({"verbatim", "semantic", "events", "json", "markup"}));
  convert->add_flag("--redact", redacted, "Redact <sensitive> spans with the configured policy");

  auto* diff_cmd = app.add_subcommand("diff", "Compare two annotations of the same audio");
  std::string diff_a, diff_b;
  diff_cmd->add_option("a", diff_a, "First annotation")->required();
  diff_cmd->add_option("b", diff_b, "Second annotation")->required();

  auto* agree = app.add_subcommand("agree", "Inter-annotator agreement over clip labels");
  std::vector<std::string> agree_paths;
  std::string metric;
  std::string labels = "clip";
  std::string majority_path;
  agree->add_option("paths", agree_paths, "Annotation or label CSV files")->required();
  agree->add_option("--metric", metric, "cohen (two inputs) or fleiss")
      ->check(CLI::IsMember({"cohen", "fleiss"}));
  agree->add_option("--labels", labels, "Label granularity")->check(CLI::IsMember({"clip"}));
  agree->add_option("--majority", majority_path, "Write majority-vote labels to this CSV");

  auto* tg = app.add_subcommand("textgrid", "Praat TextGrid import, export and gap lint");
  tg->require_subcommand(1);
  auto* tg_import = tg->add_subcommand("import", "TextGrid tier to plain-text annotation");
  std::string import_path, import_out;
  tg_import->add_option("path", import_path, "TextGrid file")->required();
  tg_import->add_option("-o,--output", import_out, "Output .txt (writes <output>.times too)");
  auto* tg_export = tg->add_subcommand("export", "Plain-text annotation to TextGrid");
  std::string export_path, export_out, export_times;
  std::optional<double> export_xmin, export_xmax;
  tg_export->add_option("path", export_path, "Annotation .txt file")->required();
  tg_export->add_option("-o,--output", export_out, "Output TextGrid");
  tg_export->add_option("--times", export_times, "Timestamp sidecar (default <path>.times)");
  tg_export->add_option("--xmin", export_xmin, "Document start in seconds");
  tg_export->add_option("--xmax", export_xmax, "Document end in seconds");
  auto* tg_gaplint = tg->add_subcommand("gaplint", "Report long silent spans in a tier");
  std::string gap_path;
  tg_gaplint->add_option("path", gap_path, "TextGrid file")->required();
  tg_gaplint->add_option("--threshold", threshold, "Minimum silent span in seconds");

  std::vector<const char*> argv{"stutter-annot"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitFailure;
  }

  Context ctx{CliConfig{}, input_format, out, err};
  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("STUTTER_ANNOT_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) apply_config_text(ctx.config, read_file(config_path), config_path);
    if (!format.empty()) apply_setting(ctx.config, "format", format);
    if (!tier.empty()) apply_setting(ctx.config, "tier", tier);
    for (const std::string& flag : rule_flags) {
      const auto eq = flag.find('=');
      if (eq == std::string::npos) throw ConfigError("--rule expects ID=on or ID=off");
      apply_setting(ctx.config, "rule." + flag.substr(0, eq), flag.substr(eq + 1));
    }
    if (threshold) apply_setting(ctx.config, "gap_threshold", std::to_string(*threshold));
  } catch (const ConfigError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return kExitFailure;
  } catch (const IoError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return kExitFailure;
  }

  try {
    if (lint->parsed()) {
      if (!explain.empty()) return cmd_explain(ctx, explain);
      if (lint_paths.empty()) {
        err << "stutter-annot: lint needs at least one path\n";
        return kExitFailure;
      }
      return cmd_lint(ctx, lint_paths, quiet_warnings);
    }
    if (convert->parsed()) return cmd_convert(ctx, convert_path, convert_to, redacted);
    if (diff_cmd->parsed()) return cmd_diff(ctx, diff_a, diff_b);
    if (agree->parsed()) return cmd_agree(ctx, agree_paths, metric, majority_path);
    if (tg_import->parsed()) return cmd_textgrid_import(ctx, import_path, import_out);
    if (tg_export->parsed()) {
      return cmd_textgrid_export(ctx, export_path, export_times, export_out, export_xmin, export_xmax);
    }
    if (tg_gaplint->parsed()) return cmd_textgrid_gaplint(ctx, gap_path);
  } catch (const IoError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return kExitFailure;
  } catch (const textgrid::TextGridError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return textgrid_exit(e);
  } catch (const InputError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return kExitErrors;
  } catch (const AgreementError& e) {
    err << "stutter-annot: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace stutter::cli
