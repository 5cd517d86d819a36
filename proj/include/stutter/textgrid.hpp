#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stutter/grammar.hpp"

namespace stutter::textgrid {

class TextGridError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedHeader,
    Malformed,
    NonMonotonicIntervals,
    UnsupportedTierClass,
    UnsupportedFormat,
    TierNotFound,
    NonPositiveThreshold,
    MissingTimestamps,
    OverlappingSegments,
    ParseErrors,
  };

  TextGridError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Interval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string text;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Tier {
  std::string name;
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Interval> intervals;
  friend bool operator==(const Tier&, const Tier&) = default;
};

struct Document {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Tier> tiers;

  const Tier* find_tier(std::string_view name) const;
  friend bool operator==(const Document&, const Document&) = default;
};

/// Reads Praat long text format from UTF-8, UTF-16LE or UTF-16BE bytes
/// (BOM-detected). Short format and point tiers are rejected.
Document read(std::string_view bytes);

/// Canonical long text format: UTF-8, LF endings, minimal decimals with at
/// most six fractional digits, quotes doubled.
std::string write(const Document& doc);

std::string format_number(double value);

struct ImportResult {
  Transcript transcript;
  std::vector<Diagnostic> warnings;
  /// Index into the tier's intervals for each segment.
  std::vector<std::size_t> interval_of_segment;
  /// Parse errors; `segment` holds the interval index, not a segment index.
  std::vector<Diagnostic> errors;
};

/// One segment per interval with non-blank text. Throws TextGridError
/// (ParseErrors) with every interval's errors listed when any fails.
ImportResult import_transcript(const Document& doc, std::string_view tier_name);

/// Same, but failing intervals are skipped and reported in `errors`.
ImportResult import_transcript_lenient(const Document& doc, std::string_view tier_name);

inline constexpr std::string_view kAnnotationTier = "annotation";
inline constexpr std::string_view kEventsTier = "events";

/// Builds "annotation" and "events" tiers tiling [range.start, range.end].
Document export_transcript(const Transcript& transcript, TimeRange range);

struct GapFinding {
  std::string tier;
  double xmin = 0.0;
  double xmax = 0.0;
  double duration = 0.0;
  std::string previous_text;
  std::string next_text;
};

inline constexpr double kDefaultGapThreshold = 0.5;

/// Maximal spans without non-blank text (explicit empty intervals and
/// uncovered stretches alike) lasting at least threshold_seconds.
std::vector<GapFinding> gap_lint(const Document& doc, std::string_view tier_name,
                                 double threshold_seconds = kDefaultGapThreshold);

}  // namespace stutter::textgrid
