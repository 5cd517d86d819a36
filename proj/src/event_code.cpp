#include "stutter/grammar.hpp"

namespace stutter {

std::string_view markup(EventCode code) {
  switch (code) {
    case EventCode::Block: return "/b";
    case EventCode::Prolongation: return "/p";
    case EventCode::SoundRepetition: return "/s";
    case EventCode::WordRepetition: return "/r";
    case EventCode::Interjection: return "/i";
  }
  return "";
}

std::string_view name(EventCode code) {
  switch (code) {
    case EventCode::Block: return "block";
    case EventCode::Prolongation: return "prolongation";
    case EventCode::SoundRepetition: return "sound_repetition";
    case EventCode::WordRepetition: return "word_repetition";
    case EventCode::Interjection: return "interjection";
  }
  return "";
}

std::optional<EventCode> code_from_letter(char32_t letter) {
  switch (letter) {
    case U'b': return EventCode::Block;
    case U'p': return EventCode::Prolongation;
    case U's': return EventCode::SoundRepetition;
    case U'r': return EventCode::WordRepetition;
    case U'i': return EventCode::Interjection;
    default: return std::nullopt;
  }
}

std::optional<EventCode> code_from_name(std::string_view text) {
  for (EventCode code : kAllEventCodes) {
    if (name(code) == text) return code;
  }
  return std::nullopt;
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "";
}

}  // namespace stutter
