#pragma once

#include <bitset>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stutter/grammar.hpp"

namespace stutter {

struct RuleInfo {
  std::string_view id;
  Severity severity;
  bool enabled_by_default;
  std::string_view summary;
  /// Annotation convention behind the rule, printed by `lint --explain`.
  std::string_view guideline;
};

std::span<const RuleInfo> rule_catalog();
const RuleInfo* find_rule(std::string_view id);

class UnknownRuleId : public std::invalid_argument {
 public:
  explicit UnknownRuleId(std::string_view id)
      : std::invalid_argument("unknown rule id '" + std::string(id) + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class RuleSet {
 public:
  static constexpr std::size_t kMaxRules = 16;

  /// Every rule flagged enabled_by_default (all warnings, no info rules).
  static RuleSet defaults();
  static RuleSet all();
  static RuleSet none() { return RuleSet{}; }
  /// The rules parse() attaches as warnings: W004, W005, W006.
  static RuleSet structural();
  /// Throws UnknownRuleId.
  static RuleSet only(std::initializer_list<std::string_view> ids);

  /// Throws UnknownRuleId.
  RuleSet& set(std::string_view id, bool enabled);
  bool enabled(std::string_view id) const;

 private:
  std::bitset<kMaxRules> bits_;
};

/// Runs every enabled rule. Never mutates the transcript. Segments without
/// source spans are re-spanned from their canonical serialization.
std::vector<Diagnostic> validate(const Transcript& transcript,
                                 const RuleSet& rules = RuleSet::defaults());

std::vector<Diagnostic> validate_segment(const Segment& segment, std::size_t index,
                                         const RuleSet& rules);

}  // namespace stutter
