#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stutter/grammar.hpp"

namespace stutter {

// Markup stripped, disfluent material kept: "[pr-pr-pr-]/sprepare" renders
// as "pr-pr-pr-prepare". One string per segment.
std::vector<std::string> to_verbatim(const Transcript& transcript);
std::string to_verbatim(const Segment& segment);

// Bracket groups and point marks deleted: "[pr-pr-pr-]/sprepare" renders
// as "prepare". One string per segment.
std::vector<std::string> to_semantic(const Transcript& transcript);
std::string to_semantic(const Segment& segment);
std::string to_semantic(const Chunk& chunk);

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct EventInstance {
  EventCode code = EventCode::Block;
  std::size_t segment_index = 0;
  std::size_t chunk_index = 0;
  /// Scalar offsets into the segment's verbatim rendering. Point marks are
  /// zero width.
  CharSpan span;
  /// Fragment count for group codes, 1 for point marks.
  std::size_t repetition_count = 1;
  /// Set for prolongations written inside a repetition fragment.
  std::optional<std::size_t> fragment_index;

  friend bool operator==(const EventInstance&, const EventInstance&) = default;
};

std::vector<EventInstance> extract_events(const Transcript& transcript);
std::vector<EventInstance> extract_events(const Segment& segment, std::size_t segment_index);

struct ClipLabels {
  std::size_t segment_index = 0;
  std::array<bool, 5> flags{};

  bool has(EventCode code) const { return flags[index_of(code)]; }
  friend bool operator==(const ClipLabels&, const ClipLabels&) = default;
};

std::vector<ClipLabels> clip_labels(const Transcript& transcript);

struct RedactionPolicy {
  enum class Mode { Placeholder, Hash, Drop };
  Mode mode = Mode::Placeholder;
  std::string token = "REDACTED";

  /// Throws std::invalid_argument when the token is empty or contains
  /// markup characters or whitespace.
  static RedactionPolicy placeholder(std::string token);
  static RedactionPolicy hash() { return {Mode::Hash, {}}; }
  static RedactionPolicy drop() { return {Mode::Drop, {}}; }
};

/// First 8 hex digits of the FNV-1a 64-bit digest of the UTF-8 text.
std::string content_digest(std::string_view text);

Transcript redact(const Transcript& transcript, const RedactionPolicy& policy);

// Event listings: CSV with header "segment,code,start,end,count" and JSON
// lines with the same fields plus "chunk".
std::string events_to_csv(const std::vector<EventInstance>& events);
std::string events_to_json_lines(const std::vector<EventInstance>& events);

}  // namespace stutter
