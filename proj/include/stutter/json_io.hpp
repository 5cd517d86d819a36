#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "stutter/grammar.hpp"

namespace stutter {

class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON AST. Chunk parts are tagged by "kind": "literal", "block",
// "prolongation" or "group".
nlohmann::json to_json(const Transcript& transcript);
nlohmann::json to_json(const Diagnostic& diagnostic);

/// Throws JsonFormatError on schema violations or on structures that break
/// the markup invariants (checked by a serialize/parse round trip).
Transcript transcript_from_json(const nlohmann::json& json);
Transcript transcript_from_json(std::string_view text);
inline Transcript transcript_from_json(const std::string& text) {
  return transcript_from_json(std::string_view(text));
}
inline Transcript transcript_from_json(const char* text) {
  return transcript_from_json(std::string_view(text));
}

std::string_view transcript_json_schema();

}  // namespace stutter
