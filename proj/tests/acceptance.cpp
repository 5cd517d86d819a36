// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "properties.hpp"
#include "stutter/cli.hpp"

using namespace stutter;

namespace {

constexpr double kKappaTolerance = 1e-9;
constexpr double kGapTolerance = 1e-6;
constexpr double kFastBudgetMs = 1000.0;
constexpr double kPropertyBudgetMs = 30000.0;
constexpr std::size_t kKappaCases = 1000;
constexpr std::size_t kPropertyCases = 500;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] %s %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  if (!pass) ++failures;
}

template <typename F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void ac1_golden_corpus() {
  std::size_t ok = 0;
  std::string first_bad;
  const double ms = time_ms([&] {
    for (std::string_view line : testing::kGoldenCorpus) {
      ParseResult r = parse(line);
      bool good = r.ok() && serialize(*r.transcript) == line;
      for (const Diagnostic& d : r.diagnostics) good = good && d.severity != Severity::Error;
      if (good) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = std::string(line);
      }
    }
  });
  const bool pass = ok == testing::kGoldenCorpus.size() && ms < kFastBudgetMs;
  report("AC1", pass,
         fmt("golden corpus: %zu/%zu parse without error and round-trip byte-identically (%.1f ms, budget %.0f ms)%s%s",
             ok, testing::kGoldenCorpus.size(), ms, kFastBudgetMs, first_bad.empty() ? "" : "; first failure: ",
             first_bad.c_str()));
}

void ac2_transform_fidelity() {
  ParseResult r = parse("[pr-pr-pr-]/sprepare");
  std::string verbatim = "(parse failed)", semantic = "(parse failed)";
  if (r.ok()) {
    verbatim = to_verbatim(r.transcript->segments.at(0));
    semantic = to_semantic(r.transcript->segments.at(0));
  }
  report("AC2", verbatim == "pr-pr-pr-prepare" && semantic == "prepare",
         "verbatim=\"" + verbatim + "\" (want \"pr-pr-pr-prepare\"), semantic=\"" + semantic +
             "\" (want \"prepare\")");
}

void ac3_table_reproduction() {
  struct Row {
    EventCode code;
    std::size_t fn, fp, total;
    const char* percentage;
  };
  const Row rows[] = {
      {EventCode::Prolongation, 35, 288, 323, "12.32%"},
      {EventCode::Block, 67, 251, 318, "12.13%"},
      {EventCode::SoundRepetition, 110, 119, 229, "8.74%"},
      {EventCode::WordRepetition, 55, 88, 143, "5.46%"},
      {EventCode::Interjection, 85, 193, 278, "10.61%"},
  };
  constexpr std::size_t kClips = 2621;
  std::vector<ClipLabels> reference(kClips), candidate(kClips);
  std::mt19937 rng(2621);
  for (const Row& row : rows) {
    // FN clips, then FP clips, then a random mix of agreeing clips, shuffled.
    std::vector<std::pair<bool, bool>> cells(kClips);
    for (std::size_t i = 0; i < kClips; ++i) {
      if (i < row.fn) cells[i] = {true, false};
      else if (i < row.fn + row.fp) cells[i] = {false, true};
      else cells[i] = rng() % 4 == 0 ? std::pair{true, true} : std::pair{false, false};
    }
    std::shuffle(cells.begin(), cells.end(), rng);
    for (std::size_t i = 0; i < kClips; ++i) {
      reference[i].flags[index_of(row.code)] = cells[i].first;
      candidate[i].flags[index_of(row.code)] = cells[i].second;
    }
  }

  bool pass = true;
  std::string detail;
  std::string rendered;
  const double ms = time_ms([&] {
    const ConfusionTable table = confusion(reference, candidate);
    rendered = render_confusion_text(table);
    for (const Row& row : rows) {
      const ConfusionCell& cell = table[row.code];
      const std::string pct = format_percentage(table.percentage_hundredths(row.code));
      const bool ok = cell.fn == row.fn && cell.fp == row.fp && cell.disagreements() == row.total &&
                      pct == row.percentage;
      pass = pass && ok;
      detail += fmt("%s %zu %s; ", std::string(name(row.code)).c_str(), cell.disagreements(), pct.c_str());
    }
    pass = pass && table.total_clips == kClips;
  });
  pass = pass && rendered.find("323") != std::string::npos && rendered.find("12.32%") != std::string::npos;
  pass = pass && ms < kFastBudgetMs;
  report("AC3", pass, fmt("confusion totals over %zu clips: %s(%.1f ms, budget %.0f ms)", kClips, detail.c_str(), ms, kFastBudgetMs));
}

void ac4_kappa_oracle() {
  std::mt19937_64 rng(4);
  std::size_t mismatches = 0;
  double worst = 0;
  for (std::size_t trial = 0; trial < kKappaCases; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    // Cohen on a random pair with a random disagreement rate.
    LabelVector x(n), y(n);
    const unsigned flip = 1 + rng() % 4;
    const unsigned bias = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng() % bias == 0;
      y[i] = rng() % (flip + 1) == 0 ? !x[i] : x[i];
    }
    const auto got = cohen_kappa(x, y);
    const auto want = oracle::contingency_kappa(x, y);
    if (got.has_value() != want.has_value()) {
      ++mismatches;
    } else if (got) {
      worst = std::max(worst, std::abs(*got - *want));
    }

    // Fleiss on a random binary count table.
    const std::size_t raters = 2 + rng() % 6;
    std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(2));
    for (auto& row : counts) {
      row[1] = rng() % (raters + 1);
      row[0] = raters - row[1];
    }
    const auto fg = fleiss_kappa(counts, raters);
    const auto fw = oracle::fleiss(counts);
    if (fg.has_value() != fw.has_value()) {
      ++mismatches;
    } else if (fg) {
      worst = std::max(worst, std::abs(*fg - *fw));
    }
  }

  const LabelVector perfect{1, 0, 1, 1, 0};
  const bool cohen_exact = cohen_kappa(perfect, perfect) == 1.0;
  const bool fleiss_exact = fleiss_kappa({{3, 0}, {0, 3}, {3, 0}}, 3) == 1.0;
  const bool pass = mismatches == 0 && worst <= kKappaTolerance && cohen_exact && fleiss_exact;
  report("AC4", pass,
         fmt("kappa vs contingency oracle: %zu cases x 2 statistics, %zu definedness mismatches, max |diff| %.3g "
             "(tolerance %.0e); perfect agreement exact 1.0: cohen=%s fleiss=%s",
             kKappaCases, mismatches, worst, kKappaTolerance, cohen_exact ? "yes" : "no",
             fleiss_exact ? "yes" : "no"));
}

void ac5_properties() {
  std::vector<testing::PropertyResult> results;
  const double ms = time_ms([&] { results = testing::run_properties(5, kPropertyCases); });
  bool pass = ms < kPropertyBudgetMs;
  std::string detail;
  std::string first_failure;
  for (const auto& r : results) {
    pass = pass && r.failed == 0 && r.cases >= kPropertyCases;
    detail += fmt("%s %zu/%zu; ", r.name.c_str(), r.cases - r.failed, r.cases);
    if (first_failure.empty() && !r.failures.empty()) first_failure = r.failures.front();
  }
  report("AC5", pass,
         fmt("property suite: %s(%.0f ms, budget %.0f ms)%s%s", detail.c_str(), ms, kPropertyBudgetMs,
             first_failure.empty() ? "" : "; first failure: ", first_failure.c_str()));
}

void ac6_gap_lint() {
  std::ifstream in(std::string(STUTTER_FIXTURES) + "/gap.TextGrid", std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::vector<textgrid::GapFinding> findings;
  std::string error;
  try {
    findings = textgrid::gap_lint(textgrid::read(buf.str()), textgrid::kAnnotationTier, 0.5);
  } catch (const std::exception& e) {
    error = e.what();
  }
  const bool pass = error.empty() && findings.size() == 1 && std::abs(findings[0].duration - 1.2) <= kGapTolerance;
  report("AC6", pass,
         error.empty() ? fmt("gap lint at 0.5 s: %zu finding(s), duration %.9f (want 1.2 +/- %.0e)", findings.size(),
                             findings.empty() ? 0.0 : findings[0].duration, kGapTolerance)
                       : "gap lint failed: " + error);
}

bool has_rule(std::string_view text, std::string_view id) {
  ParseResult r = parse(text);
  if (!r.ok()) return false;
  for (const Diagnostic& d : validate(*r.transcript)) {
    if (d.rule_id == id) return true;
  }
  return false;
}

void ac7_lint_rules() {
  const bool w001_fires = has_rule("[add add]/s add", "W001");
  const bool w001_quiet = !has_rule("[A-a-]/s[add]/radd", "W001");
  const bool w002_fires = has_rule("We meet at 2 thirty", "W002");

  struct Case {
    std::vector<std::string> args;
    int expected;
  };
  const std::string dir = STUTTER_FIXTURES;
  const std::vector<Case> matrix = {
      {{"lint", dir + "/clean.txt"}, 0},
      {{"lint", dir + "/digits.txt"}, 1},
      {{"lint", dir + "/unclosed.txt"}, 2},
      {{"lint", dir + "/clean.TextGrid"}, 0},
      {{"lint", dir + "/unclosed.TextGrid"}, 2},
      {{"lint", dir + "/missing.txt"}, 3},
      {{"lint", "--quiet-warnings", dir + "/digits.txt"}, 0},
  };
  std::size_t matched = 0;
  std::string codes;
  for (const Case& c : matrix) {
    std::ostringstream out, err;
    const int code = cli::run(c.args, out, err);
    matched += code == c.expected;
    codes += std::to_string(code);
  }
  const bool pass = w001_fires && w001_quiet && w002_fires && matched == matrix.size();
  report("AC7", pass,
         fmt("W001 on \"[add add]/s add\": %s; W001 on \"[A-a-]/s[add]/radd\": %s; W002 on digits: %s; "
             "exit matrix %zu/%zu (got %s, want 0120230)",
             w001_fires ? "fires" : "silent", w001_quiet ? "silent" : "fires", w002_fires ? "fires" : "silent",
             matched, matrix.size(), codes.c_str()));
}

}  // namespace

int main() {
  ac1_golden_corpus();
  ac2_transform_fidelity();
  ac3_table_reproduction();
  ac4_kappa_oracle();
  ac5_properties();
  ac6_gap_lint();
  ac7_lint_rules();
  return failures;
}
