#include <algorithm>

#include "stutter/grammar.hpp"
#include "stutter/unicode.hpp"
#include "stutter/validate.hpp"

namespace stutter {
namespace {

using unicode::append_utf8;
using unicode::is_space;

std::string collapse_spaces(std::u32string_view text) {
  std::string out;
  bool pending_space = false;
  for (char32_t cp : text) {
    if (is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    append_utf8(out, cp);
  }
  return out;
}

std::string describe(char32_t cp) {
  std::string out = "'";
  append_utf8(out, cp);
  out += "'";
  return out;
}

class LineParser {
 public:
  LineParser(std::u32string_view line, std::size_t segment, std::vector<Diagnostic>& diags)
      : src_(line), segment_(segment), diags_(diags) {}

  // Returns false when any error was reported.
  bool run(std::size_t start, Segment& out) {
    pos_ = start;
    while (true) {
      while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
      if (pos_ >= src_.size()) break;
      if (auto c = chunk()) out.chunks.push_back(std::move(*c));
    }
    return !failed_;
  }

 private:
  std::u32string_view src_;
  std::size_t segment_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  bool failed_ = false;

  void error(std::string rule, std::string message, std::size_t begin, std::size_t end) {
    end = std::min(std::max(end, begin), src_.size());
    begin = std::min(begin, end);
    diags_.push_back(
        {Severity::Error, std::move(rule), std::move(message), segment_, SourceSpan::of(begin, end)});
    failed_ = true;
  }

  std::nullopt_t recover() {
    while (pos_ < src_.size() && !is_space(src_[pos_])) ++pos_;
    return std::nullopt;
  }

  std::optional<Chunk> chunk() {
    if (src_[pos_] == U'<') return sensitive_chunk();

    const std::size_t start = pos_;
    Chunk chunk;
    std::string literal;
    std::size_t literal_begin = 0;
    std::size_t literal_len = 0;

    const auto push = [&](Part part, std::size_t begin) {
      chunk.parts.push_back(std::move(part));
      chunk.part_spans.push_back(SourceSpan::of(begin, pos_));
    };
    const auto flush = [&] {
      if (literal.empty()) return;
      chunk.parts.push_back(LiteralRun{std::move(literal)});
      chunk.part_spans.push_back(SourceSpan::of(literal_begin, pos_));
      literal.clear();
    };

    while (pos_ < src_.size() && !is_space(src_[pos_])) {
      const char32_t ch = src_[pos_];
      const std::size_t here = pos_;
      if (ch == U'[') {
        flush();
        auto group = bracket_group();
        if (!group) return recover();
        push(std::move(*group), here);
      } else if (ch == U'/') {
        const auto code = pos_ + 1 < src_.size() ? code_from_letter(src_[pos_ + 1]) : std::nullopt;
        if (!code) {
          unknown_code();
          return recover();
        }
        if (is_group_code(*code)) {
          error("StrayGroupCode",
                std::string(markup(*code)) + " must follow a closing bracket", pos_, pos_ + 2);
          return recover();
        }
        if (*code == EventCode::Prolongation && literal_len == 0) {
          error("ProlongationAtChunkStart",
                "/p must follow at least one transcribed character in the same word", pos_,
                pos_ + 2);
          return recover();
        }
        flush();
        pos_ += 2;
        const auto kind = *code == EventCode::Block ? PointKind::Block : PointKind::Prolongation;
        push(PointMark{kind, literal_len}, here);
      } else if (ch == U']' || ch == U'>') {
        error("StrayCloser", describe(ch) + " has no matching opener", pos_, pos_ + 1);
        return recover();
      } else if (ch == U'<') {
        error("SensitiveNotWholeChunk", "sensitive span <...> must stand as its own word", pos_,
              pos_ + 1);
        return recover();
      } else {
        if (literal.empty()) literal_begin = pos_;
        append_utf8(literal, ch);
        ++literal_len;
        ++pos_;
      }
    }
    flush();

    for (std::size_t i = 0; i < chunk.parts.size(); ++i) {
      if (auto* g = std::get_if<BracketGroup>(&chunk.parts[i])) {
        g->attached = i + 1 < chunk.parts.size();
      }
    }
    chunk.span = SourceSpan::of(start, pos_);
    return chunk;
  }

  void unknown_code() {
    if (pos_ + 1 >= src_.size() || is_space(src_[pos_ + 1])) {
      error("UnknownCode", "'/' must be followed by one of b, p, s, r, i", pos_, pos_ + 1);
    } else {
      std::string shown = "/";
      append_utf8(shown, src_[pos_ + 1]);
      error("UnknownCode", "unknown event code " + shown + " (expected /b, /p, /s, /r or /i)", pos_,
            pos_ + 2);
    }
  }

  std::optional<BracketGroup> bracket_group() {
    const std::size_t open = pos_++;
    BracketGroup group;
    std::string current;
    std::size_t current_len = 0;
    std::vector<std::size_t> offsets;

    const auto finish = [&](Separator sep) {
      group.fragments.push_back(Fragment{std::move(current), std::move(offsets), sep});
      current.clear();
      offsets.clear();
      current_len = 0;
    };

    while (true) {
      if (pos_ >= src_.size()) {
        error("UnclosedBracket", "'[' is never closed", open, src_.size());
        return std::nullopt;
      }
      const char32_t ch = src_[pos_];
      if (ch == U']') {
        if (!current.empty()) {
          finish(Separator::None);
        } else if (!group.fragments.empty() &&
                   group.fragments.back().trailing_separator == Separator::Space) {
          group.fragments.back().trailing_separator = Separator::None;
        }
        ++pos_;
        break;
      }
      if (ch == U'[') {
        error("NestedBrackets", "brackets cannot be nested", pos_, pos_ + 1);
        return std::nullopt;
      }
      if (ch == U'-') {
        if (current.empty()) {
          error("EmptyFragment", "repetition fragment before '-' is empty", pos_, pos_ + 1);
          return std::nullopt;
        }
        finish(Separator::Hyphen);
        ++pos_;
        continue;
      }
      if (is_space(ch)) {
        if (!current.empty()) finish(Separator::Space);
        ++pos_;
        continue;
      }
      if (ch == U'/') {
        const auto code = pos_ + 1 < src_.size() ? code_from_letter(src_[pos_ + 1]) : std::nullopt;
        if (!code) {
          unknown_code();
          return std::nullopt;
        }
        if (*code == EventCode::Prolongation) {
          if (current_len == 0) {
            error("ProlongationAtChunkStart",
                  "/p inside brackets must follow at least one character of the fragment", pos_,
                  pos_ + 2);
            return std::nullopt;
          }
          offsets.push_back(current_len);
          pos_ += 2;
          continue;
        }
        if (*code == EventCode::Block) {
          error("BlockInsideGroup", "/b cannot appear inside a repetition group", pos_, pos_ + 2);
        } else {
          error("CodeInsideGroup",
                std::string(markup(*code)) + " belongs after the closing bracket", pos_, pos_ + 2);
        }
        return std::nullopt;
      }
      if (ch == U'<' || ch == U'>') {
        error("UnexpectedCharacter", describe(ch) + " is not allowed inside brackets", pos_,
              pos_ + 1);
        return std::nullopt;
      }
      append_utf8(current, ch);
      ++current_len;
      ++pos_;
    }

    if (group.fragments.empty()) {
      error("EmptyGroup", "bracket group has no transcribed content", open, pos_);
      return std::nullopt;
    }

    const std::size_t codes_begin = pos_;
    while (pos_ + 1 < src_.size() && src_[pos_] == U'/') {
      const auto code = code_from_letter(src_[pos_ + 1]);
      if (!code || !is_group_code(*code)) break;
      if (std::find(group.codes.begin(), group.codes.end(), *code) != group.codes.end()) {
        error("DuplicateCode", std::string(markup(*code)) + " is repeated on the same group", pos_,
              pos_ + 2);
        return std::nullopt;
      }
      group.codes.push_back(*code);
      pos_ += 2;
    }
    if (group.codes.empty()) {
      error("GroupWithoutCode", "bracket group must be followed by /s, /r or /i", open, pos_);
      return std::nullopt;
    }
    if (group.codes.size() > 2) {
      error("TooManyCodes", "a group carries at most two event codes", codes_begin, pos_);
      return std::nullopt;
    }
    return group;
  }

  std::optional<Chunk> sensitive_chunk() {
    const std::size_t open = pos_;
    const auto close = src_.find(U'>', open + 1);
    if (close == std::u32string_view::npos) {
      error("UnclosedAngle", "'<' is never closed", open, src_.size());
      pos_ = src_.size();
      return std::nullopt;
    }
    for (std::size_t i = open + 1; i < close; ++i) {
      const char32_t ch = src_[i];
      if (ch == U'[' || ch == U']' || ch == U'/' || ch == U'<') {
        error("MarkupInSensitive", "annotation markup is not allowed inside <...>", i, i + 1);
        pos_ = close + 1;
        return recover();
      }
    }
    pos_ = close + 1;
    if (pos_ < src_.size() && !is_space(src_[pos_])) {
      error("SensitiveNotWholeChunk", "sensitive span <...> must stand as its own word", pos_,
            pos_ + 1);
      return recover();
    }
    std::string text = collapse_spaces(src_.substr(open + 1, close - open - 1));
    if (text.empty()) {
      error("EmptySensitive", "sensitive span <...> is empty", open, pos_);
      return std::nullopt;
    }
    Chunk chunk;
    chunk.sensitive = true;
    chunk.parts.push_back(LiteralRun{std::move(text)});
    chunk.part_spans.push_back(SourceSpan::of(open + 1, close));
    chunk.span = SourceSpan::of(open, pos_);
    return chunk;
  }
};

ParseResult parse_line(std::u32string_view line, std::size_t index, const ParseOptions& options) {
  Segment segment;
  std::size_t start = 0;
  if (options.speaker_prefix) {
    if (const auto tab = line.find(U'\t'); tab != std::u32string_view::npos) {
      std::string speaker = collapse_spaces(line.substr(0, tab));
      if (!speaker.empty()) segment.speaker = std::move(speaker);
      start = tab + 1;
    }
  }
  ParseResult result;
  LineParser parser(line, index, result.diagnostics);
  if (!parser.run(start, segment)) return result;
  if (options.structural_warnings) {
    result.diagnostics = validate_segment(segment, index, RuleSet::structural());
  }
  result.transcript = Transcript{{std::move(segment)}, std::nullopt};
  return result;
}

}  // namespace

std::size_t literal_length(const Chunk& chunk) {
  std::size_t n = 0;
  for (const Part& part : chunk.parts) {
    if (const auto* run = std::get_if<LiteralRun>(&part)) n += unicode::length(run->text);
  }
  return n;
}

ParseResult parse_segment(std::string_view line, std::size_t segment_index,
                          const ParseOptions& options) {
  const std::string normalized = options.normalize_nfc ? unicode::to_nfc(line) : std::string(line);
  return parse_line(unicode::decode_utf8(normalized), segment_index, options);
}

ParseResult parse(std::string_view source, const ParseOptions& options) {
  ParseResult result;
  result.transcript = Transcript{};
  if (source.empty()) return result;

  const std::string normalized =
      options.normalize_nfc ? unicode::to_nfc(source) : std::string(source);
  std::u32string text = unicode::decode_utf8(normalized);
  if (!text.empty() && text.back() == U'\n') text.pop_back();

  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  std::size_t index = 0;
  std::size_t line_start = 0;
  while (true) {
    std::size_t line_end = text.find(U'\n', line_start);
    const bool last = line_end == std::u32string::npos;
    if (last) line_end = text.size();
    std::u32string_view line(text.data() + line_start, line_end - line_start);
    if (!line.empty() && line.back() == U'\r') line.remove_suffix(1);

    ParseResult one = parse_line(line, index, options);
    if (one.ok()) {
      result.transcript->segments.push_back(std::move(one.transcript->segments.front()));
      warnings.insert(warnings.end(), one.diagnostics.begin(), one.diagnostics.end());
    } else {
      errors.insert(errors.end(), one.diagnostics.begin(), one.diagnostics.end());
    }
    ++index;
    if (last) break;
    line_start = line_end + 1;
  }

  if (!errors.empty()) {
    result.transcript.reset();
    result.diagnostics = std::move(errors);
  } else {
    result.diagnostics = std::move(warnings);
  }
  return result;
}

}  // namespace stutter
