#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stutter/transforms.hpp"
#include "stutter/validate.hpp"

namespace stutter::cli {

enum class OutputFormat { Text, Json, Csv };

struct CliConfig {
  RuleSet rules = RuleSet::defaults();
  double gap_threshold = 0.5;
  RedactionPolicy redaction = RedactionPolicy::placeholder("REDACTED");
  OutputFormat format = OutputFormat::Text;
  std::string tier = "annotation";
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one `key = value` setting. Keys: rule.<ID> (on|off), gap_threshold,
/// redaction (placeholder:<TOKEN> | hash | drop), format (text|json|csv),
/// tier. Throws ConfigError, including for unknown rule ids.
void apply_setting(CliConfig& config, std::string_view key, std::string_view value);

/// Flat key-value text: one `key = value` per line, '#' starts a comment.
void apply_config_text(CliConfig& config, std::string_view text, std::string_view origin);

inline constexpr int kExitClean = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitErrors = 2;
inline constexpr int kExitFailure = 3;

/// Entry point for `stutter-annot`. Reports go to out, tool errors to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stutter::cli
