#include "stutter/validate.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "stutter/unicode.hpp"

namespace stutter {
namespace {

constexpr std::array<RuleInfo, 7> kRules = {{
    {"W001", Severity::Warning, true,
     "short word repetition marked as sound repetition",
     "Every fragment of this /s group spells the word that follows, which looks like a\n"
     "whole one-syllable word said again. Whole-word repeats take /r:\n"
     "  [my my]/r my name\n"
     "Keep /s for a repeated opening sound: [pr-pr-]/sprepare"},
    {"W002", Severity::Warning, true, "Arabic numerals in transcript text",
     "Digits in the text. Spell numbers out the way they were said:\n"
     "  meet at two thirty    rather than    meet at 2:30"},
    {"W003", Severity::Warning, true, "symbol or URL in transcript text",
     "An address, link or symbol in the text. Spell it out as pronounced, or wrap\n"
     "personal details in <...> so redaction can remove them:\n"
     "  info at example dot org"},
    {"W004", Severity::Warning, true, "sound repetition group without hyphen separators",
     "Inside an /s group each repeated sound ends in a hyphen:\n"
     "  [pr-pr-pr-]/sprepare    verbatim: pr-pr-pr-prepare"},
    {"W005", Severity::Warning, true, "sound repetition group detached from its word",
     "An /s group is glued to the word whose onset it repeats. A space after the code\n"
     "splits them:\n"
     "  [sh-]/sshopping    rather than    [sh-]/s shopping"},
    {"W006", Severity::Warning, true, "block at the end of a segment",
     "A /b sits in front of the sound the speaker is held on. With nothing after it in\n"
     "the segment, the word may have landed in the next interval or the mark is\n"
     "misplaced; check the neighbouring audio."},
    {"I001", Severity::Info, false, "reminder: blocks and prolongations need careful listening",
     "Informational only. Point marks are where annotators disagree most, so a second\n"
     "listen pays off:\n"
     "  - /p: the sound keeps going with steady airflow;\n"
     "  - /b: airflow stops or the sound is held back, possibly with no audible pause;\n"
     "  - a sound repeated on purpose to get past a block is coded /b, not /s."},
}};

std::size_t rule_index(std::string_view id) {
  for (std::size_t i = 0; i < kRules.size(); ++i) {
    if (kRules[i].id == id) return i;
  }
  throw UnknownRuleId(id);
}

std::string literal_text(const std::vector<Part>& parts, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < parts.size(); ++i) {
    if (const auto* run = std::get_if<LiteralRun>(&parts[i])) out += run->text;
  }
  return out;
}

bool has_code(const BracketGroup& group, EventCode code) {
  return std::find(group.codes.begin(), group.codes.end(), code) != group.codes.end();
}

class SegmentChecker {
 public:
  SegmentChecker(const Segment& segment, std::size_t index, const RuleSet& rules,
                 std::vector<Diagnostic>& out)
      : seg_(segment), index_(index), rules_(rules), out_(out) {}

  void run() {
    for (std::size_t c = 0; c < seg_.chunks.size(); ++c) {
      const Chunk& chunk = seg_.chunks[c];
      for (std::size_t p = 0; p < chunk.parts.size(); ++p) {
        const Part& part = chunk.parts[p];
        if (const auto* run = std::get_if<LiteralRun>(&part)) {
          if (!chunk.sensitive) check_text(run->text, span_of(chunk, p).begin, true);
        } else if (const auto* group = std::get_if<BracketGroup>(&part)) {
          check_group(c, p, *group);
        } else {
          check_mark(c, p, std::get<PointMark>(part));
        }
      }
    }
    if (rules_.enabled("I001")) reminder();
  }

 private:
  const Segment& seg_;
  std::size_t index_;
  const RuleSet& rules_;
  std::vector<Diagnostic>& out_;

  static SourceSpan span_of(const Chunk& chunk, std::size_t part) {
    return part < chunk.part_spans.size() ? chunk.part_spans[part] : chunk.span;
  }

  void emit(std::string_view id, std::string message, SourceSpan span) {
    const RuleInfo& rule = kRules[rule_index(id)];
    out_.push_back({rule.severity, std::string(id), std::move(message), index_, span});
  }

  // Literal runs get exact per-character spans; fragment text reports the
  // whole group span.
  void check_text(std::string_view text, std::size_t base, bool exact, SourceSpan fallback = {}) {
    const std::u32string scalars = unicode::decode_utf8(text);
    const auto at = [&](std::size_t b, std::size_t e) {
      return exact ? SourceSpan::of(base + b, base + e) : fallback;
    };
    if (rules_.enabled("W002")) {
      for (std::size_t i = 0; i < scalars.size();) {
        if (scalars[i] < U'0' || scalars[i] > U'9') {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < scalars.size() && scalars[j] >= U'0' && scalars[j] <= U'9') ++j;
        emit("W002",
             "Arabic numerals \"" + unicode::encode_utf8(scalars.substr(i, j - i)) +
                 "\"; write the number out in words",
             at(i, j));
        i = j;
      }
    }
    if (rules_.enabled("W003")) {
      const std::string folded = unicode::fold_case(text);
      static constexpr std::array<std::string_view, 9> kPatterns = {
          "@", "://", "www.", ".com", ".org", ".net", ".edu", ".gov", ".io"};
      for (std::string_view pattern : kPatterns) {
        const auto hit = folded.find(pattern);
        if (hit == std::string::npos) continue;
        const std::size_t begin = unicode::length(std::string_view(folded).substr(0, hit));
        emit("W003",
             "symbol \"" + std::string(pattern) + "\" in text; transcribe it as it is spoken",
             at(begin, begin + unicode::length(pattern)));
        break;
      }
    }
  }

  std::string following_word(std::size_t c, std::size_t p) const {
    const Chunk& chunk = seg_.chunks[c];
    if (p + 1 < chunk.parts.size()) return literal_text(chunk.parts, p + 1);
    for (std::size_t k = c + 1; k < seg_.chunks.size(); ++k) {
      std::string text = literal_text(seg_.chunks[k].parts, 0);
      if (!text.empty()) return text;
    }
    return {};
  }

  void check_group(std::size_t c, std::size_t p, const BracketGroup& group) {
    const Chunk& chunk = seg_.chunks[c];
    const SourceSpan span = span_of(chunk, p);
    for (const Fragment& fragment : group.fragments) check_text(fragment.text, 0, false, span);

    if (!has_code(group, EventCode::SoundRepetition)) return;
    if (rules_.enabled("W001")) {
      const std::string next = unicode::fold_case(following_word(c, p));
      const bool all_equal =
          !next.empty() && std::all_of(group.fragments.begin(), group.fragments.end(),
                                       [&](const Fragment& f) {
                                         return unicode::fold_case(f.text) == next;
                                       });
      if (all_equal) {
        emit("W001",
             "repeated one-syllable word \"" + group.fragments.front().text +
                 "\" is marked /s; label it as word repetition /r unless the first sound alone "
                 "is clearly repeated",
             span);
      }
    }
    if (rules_.enabled("W004")) {
      const bool hyphenated = std::all_of(
          group.fragments.begin(), group.fragments.end(),
          [](const Fragment& f) { return f.trailing_separator == Separator::Hyphen; });
      if (!hyphenated) {
        emit("W004", "sound repetition fragments should each end with '-', e.g. [pr-pr-]/s",
             span);
      }
    }
    if (rules_.enabled("W005") && !group.attached) {
      emit("W005", "sound repetition group should attach to its word without a space", span);
    }
  }

  void check_mark(std::size_t c, std::size_t p, const PointMark& mark) {
    if (!rules_.enabled("W006") || mark.kind != PointKind::Block) return;
    const bool last_chunk = c + 1 == seg_.chunks.size();
    const bool last_part = p + 1 == seg_.chunks[c].parts.size();
    if (last_chunk && last_part) {
      emit("W006", "block at the end of the segment has no following sound",
           span_of(seg_.chunks[c], p));
    }
  }

  void reminder() {
    for (const Chunk& chunk : seg_.chunks) {
      for (std::size_t p = 0; p < chunk.parts.size(); ++p) {
        const Part& part = chunk.parts[p];
        bool hit = std::holds_alternative<PointMark>(part);
        if (const auto* group = std::get_if<BracketGroup>(&part)) {
          hit = std::any_of(group->fragments.begin(), group->fragments.end(),
                            [](const Fragment& f) { return !f.prolongation_offsets.empty(); });
        }
        if (hit) {
          emit("I001",
               "block/prolongation present; check airflow and backtracking before settling the "
               "label (see --explain I001)",
               span_of(chunk, p));
          return;
        }
      }
    }
  }
};

bool has_spans(const Segment& segment) {
  return std::all_of(segment.chunks.begin(), segment.chunks.end(), [](const Chunk& c) {
    return c.span.known && c.part_spans.size() == c.parts.size();
  });
}

}  // namespace

std::span<const RuleInfo> rule_catalog() { return kRules; }

const RuleInfo* find_rule(std::string_view id) {
  for (const RuleInfo& rule : kRules) {
    if (rule.id == id) return &rule;
  }
  return nullptr;
}

RuleSet RuleSet::defaults() {
  RuleSet set;
  for (std::size_t i = 0; i < kRules.size(); ++i) set.bits_[i] = kRules[i].enabled_by_default;
  return set;
}

RuleSet RuleSet::all() {
  RuleSet set;
  for (std::size_t i = 0; i < kRules.size(); ++i) set.bits_[i] = true;
  return set;
}

RuleSet RuleSet::structural() { return only({"W004", "W005", "W006"}); }

RuleSet RuleSet::only(std::initializer_list<std::string_view> ids) {
  RuleSet set;
  for (std::string_view id : ids) set.set(id, true);
  return set;
}

RuleSet& RuleSet::set(std::string_view id, bool enabled) {
  bits_[rule_index(id)] = enabled;
  return *this;
}

bool RuleSet::enabled(std::string_view id) const { return bits_[rule_index(id)]; }

std::vector<Diagnostic> validate_segment(const Segment& segment, std::size_t index,
                                         const RuleSet& rules) {
  std::vector<Diagnostic> out;
  if (has_spans(segment)) {
    SegmentChecker(segment, index, rules, out).run();
  } else {
    ParseOptions options;
    options.structural_warnings = false;
    const ParseResult spanned = parse_segment(serialize(segment), index, options);
    if (spanned.ok()) {
      SegmentChecker(spanned.transcript->segments.front(), index, rules, out).run();
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.begin, a.rule_id) < std::tie(b.span.begin, b.rule_id);
  });
  return out;
}

std::vector<Diagnostic> validate(const Transcript& transcript, const RuleSet& rules) {
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < transcript.segments.size(); ++i) {
    auto one = validate_segment(transcript.segments[i], i, rules);
    out.insert(out.end(), one.begin(), one.end());
  }
  return out;
}

}  // namespace stutter
