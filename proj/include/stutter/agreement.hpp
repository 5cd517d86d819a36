#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stutter/grammar.hpp"
#include "stutter/transforms.hpp"

namespace stutter {

class AgreementError : public std::invalid_argument {
 public:
  enum class Kind { LengthMismatch, EmptyInput, RowSumMismatch, EvenAnnotatorCount, InvalidLabel };

  AgreementError(Kind kind, const std::string& message)
      : std::invalid_argument(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// --- alignment -------------------------------------------------------------

/// One semantic word of a transcript together with the chunks it owns.
/// Chunks with no semantic text join the next word of their segment (or
/// the previous one at segment end); a segment without words yields one
/// empty token so every chunk and segment is represented.
struct SemanticToken {
  std::string text;
  std::size_t segment = 0;
  std::size_t first_chunk = 0;
  std::size_t last_chunk = 0;  // exclusive
  bool starts_segment = false;
};

std::vector<SemanticToken> semantic_tokens(const Transcript& transcript);

struct AlignedPair {
  std::optional<std::size_t> a;
  std::optional<std::size_t> b;
  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  std::size_t cost = 0;
};

/// Global alignment with unit mismatch and gap costs, case-insensitive
/// equality. Ties resolve match > mismatch > gap in A > gap in B, walking
/// back from the end of both sequences.
Alignment align_tokens(std::span<const std::string> a, std::span<const std::string> b);
Alignment align(const Transcript& a, const Transcript& b);

struct DiffEntry {
  std::size_t position = 0;
  std::optional<std::size_t> a_token;
  std::optional<std::size_t> b_token;
  std::string a_markup;
  std::string b_markup;
  std::vector<EventCode> differing_codes;
};

struct DiffReport {
  std::vector<DiffEntry> entries;
  bool empty() const { return entries.empty(); }
};

DiffReport diff(const Transcript& a, const Transcript& b);

std::string render_diff(const DiffReport& report);

// --- label statistics --------------------------------------------------------

using LabelVector = std::vector<std::uint8_t>;

/// Cohen's kappa for two binary raters. nullopt when chance agreement is 1
/// (kappa undefined). Exactly 1.0 for perfect agreement with both
/// categories present.
std::optional<double> cohen_kappa(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

/// Fleiss' kappa from a per-item category-count matrix; every row must sum
/// to raters_per_item (>= 2). nullopt when expected agreement is 1.
std::optional<double> fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts,
                                   std::size_t raters_per_item);

/// Per position 1 iff strictly more than half the annotators vote 1. Even
/// annotator counts are rejected.
LabelVector majority_vote(std::span<const LabelVector> labels);

struct ConfusionCell {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t disagreements() const { return fn + fp; }
  friend bool operator==(const ConfusionCell&, const ConfusionCell&) = default;
};

/// Disagreement percentage in hundredths of a percent, rounded half up:
/// 323 of 2621 gives 1232 (12.32%).
std::size_t percentage_hundredths(std::size_t count, std::size_t total);
std::string format_percentage(std::size_t hundredths);

struct ConfusionTable {
  std::array<ConfusionCell, 5> cells{};
  std::size_t total_clips = 0;

  const ConfusionCell& operator[](EventCode code) const { return cells[index_of(code)]; }
  std::size_t percentage_hundredths(EventCode code) const;
};

/// FN: candidate 0 where reference 1. FP: candidate 1 where reference 0.
ConfusionCell confusion_counts(std::span<const std::uint8_t> reference,
                               std::span<const std::uint8_t> candidate);
ConfusionTable confusion(std::span<const ClipLabels> reference, std::span<const ClipLabels> candidate);

/// Codes in the row order used by disagreement reports.
inline constexpr std::array<EventCode, 5> kReportOrder = {
    EventCode::Prolongation, EventCode::Block, EventCode::SoundRepetition,
    EventCode::WordRepetition, EventCode::Interjection};

std::string render_confusion_text(const ConfusionTable& table);
std::string render_confusion_csv(const ConfusionTable& table);

/// One label column per code across clips.
LabelVector label_column(std::span<const ClipLabels> labels, EventCode code);

}  // namespace stutter
