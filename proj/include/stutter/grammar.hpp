#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stutter {

/// The five annotated stuttering events. Textual markup is "/b", "/p",
/// "/s", "/r" and "/i" respectively.
enum class EventCode { Block, Prolongation, SoundRepetition, WordRepetition, Interjection };

inline constexpr std::array<EventCode, 5> kAllEventCodes = {
    EventCode::Block, EventCode::Prolongation, EventCode::SoundRepetition,
    EventCode::WordRepetition, EventCode::Interjection};

std::string_view markup(EventCode code);
/// snake_case name used in CSV, JSON and TextGrid event tiers.
std::string_view name(EventCode code);
std::optional<EventCode> code_from_letter(char32_t letter);
std::optional<EventCode> code_from_name(std::string_view name);
constexpr std::size_t index_of(EventCode code) { return static_cast<std::size_t>(code); }
constexpr bool is_group_code(EventCode code) {
  return code == EventCode::SoundRepetition || code == EventCode::WordRepetition ||
         code == EventCode::Interjection;
}

/// Half-open range of Unicode scalar offsets within one source line.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool known = false;

  static SourceSpan of(std::size_t b, std::size_t e) { return {b, e, true}; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class PointKind { Block, Prolongation };

constexpr EventCode to_code(PointKind kind) {
  return kind == PointKind::Block ? EventCode::Block : EventCode::Prolongation;
}

/// Block or prolongation anchored at a scalar offset into the chunk's
/// accumulated literal text.
struct PointMark {
  PointKind kind = PointKind::Block;
  std::size_t offset = 0;
  friend bool operator==(const PointMark&, const PointMark&) = default;
};

enum class Separator { Hyphen, Space, None };

struct Fragment {
  std::string text;
  std::vector<std::size_t> prolongation_offsets;
  Separator trailing_separator = Separator::None;
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct BracketGroup {
  std::vector<Fragment> fragments;
  std::vector<EventCode> codes;
  /// True when the group abuts following material in the same chunk.
  bool attached = false;
  friend bool operator==(const BracketGroup&, const BracketGroup&) = default;
};

struct LiteralRun {
  std::string text;
  friend bool operator==(const LiteralRun&, const LiteralRun&) = default;
};

using Part = std::variant<LiteralRun, PointMark, BracketGroup>;

/// One whitespace-delimited unit of markup. Source spans are provenance
/// only and take no part in equality.
struct Chunk {
  std::vector<Part> parts;
  bool sensitive = false;
  SourceSpan span;
  std::vector<SourceSpan> part_spans;

  friend bool operator==(const Chunk& a, const Chunk& b) {
    return a.sensitive == b.sensitive && a.parts == b.parts;
  }
};

struct TimeRange {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

struct Segment {
  std::vector<Chunk> chunks;
  std::optional<TimeRange> time_range;
  std::optional<std::string> speaker;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Parsed form of a markup document. source_name is metadata and is
/// ignored by equality.
struct Transcript {
  std::vector<Segment> segments;
  std::optional<std::string> source_name;

  friend bool operator==(const Transcript& a, const Transcript& b) {
    return a.segments == b.segments;
  }
};

enum class Severity { Error, Warning, Info };
std::string_view to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string rule_id;
  std::string message;
  std::size_t segment = 0;
  SourceSpan span;
};

struct ParseOptions {
  /// Treat text before the first TAB of a line as a speaker label.
  bool speaker_prefix = true;
  bool normalize_nfc = true;
  /// Attach W004/W005/W006 structural warnings to the result.
  bool structural_warnings = true;
};

struct ParseResult {
  std::optional<Transcript> transcript;
  /// Errors when transcript is empty, otherwise warnings.
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return transcript.has_value(); }
};

/// Parses newline-delimited markup. An empty source yields zero segments;
/// one trailing newline terminates the last segment.
ParseResult parse(std::string_view source, const ParseOptions& options = {});

/// Parses a single segment (no newline splitting). Diagnostics refer to
/// segment_index.
ParseResult parse_segment(std::string_view line, std::size_t segment_index,
                          const ParseOptions& options = {});

std::string serialize(const Transcript& transcript);
std::string serialize(const Segment& segment);
std::string serialize(const Chunk& chunk);

// Accumulated literal length (in scalars) of a chunk's literal runs.
std::size_t literal_length(const Chunk& chunk);

}  // namespace stutter
