#include <charconv>
#include <cmath>

#include "stutter/cli.hpp"

namespace stutter::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void apply_setting(CliConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key.starts_with("rule.")) {
    const std::string_view id = key.substr(5);
    bool enabled = false;
    if (value == "on" || value == "true" || value == "1") {
      enabled = true;
    } else if (value != "off" && value != "false" && value != "0") {
      throw ConfigError("rule setting must be on or off, got \"" + std::string(value) + "\"");
    }
    try {
      config.rules.set(id, enabled);
    } catch (const UnknownRuleId& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "gap_threshold") {
    double threshold = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), threshold);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(threshold) ||
        threshold <= 0) {
      throw ConfigError("gap_threshold must be a positive number, got \"" + std::string(value) + "\"");
    }
    config.gap_threshold = threshold;
  } else if (key == "redaction") {
    if (value == "hash") {
      config.redaction = RedactionPolicy::hash();
    } else if (value == "drop") {
      config.redaction = RedactionPolicy::drop();
    } else if (value.starts_with("placeholder:")) {
      try {
        config.redaction = RedactionPolicy::placeholder(std::string(value.substr(12)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("redaction must be placeholder:<TOKEN>, hash or drop");
    }
  } else if (key == "format") {
    if (value == "text") {
      config.format = OutputFormat::Text;
    } else if (value == "json") {
      config.format = OutputFormat::Json;
    } else if (value == "csv") {
      config.format = OutputFormat::Csv;
    } else {
      throw ConfigError("format must be text, json or csv");
    }
  } else if (key == "tier") {
    if (value.empty()) throw ConfigError("tier name must not be empty");
    config.tier = std::string(value);
  } else {
    throw ConfigError("unknown configuration key \"" + std::string(key) + "\"");
  }
}

void apply_config_text(CliConfig& config, std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

}  // namespace stutter::cli
