#include "stutter/grammar.hpp"
#include "stutter/unicode.hpp"

namespace stutter {
namespace {

// Inserts "/p" at each scalar offset of text.
void write_with_prolongations(std::string& out, std::string_view text,
                              const std::vector<std::size_t>& offsets) {
  const std::u32string scalars = unicode::decode_utf8(text);
  std::size_t next = 0;
  for (std::size_t i = 0; i <= scalars.size(); ++i) {
    while (next < offsets.size() && offsets[next] == i) {
      out += "/p";
      ++next;
    }
    if (i < scalars.size()) unicode::append_utf8(out, scalars[i]);
  }
}

void write_group(std::string& out, const BracketGroup& group) {
  out.push_back('[');
  for (const Fragment& fragment : group.fragments) {
    write_with_prolongations(out, fragment.text, fragment.prolongation_offsets);
    switch (fragment.trailing_separator) {
      case Separator::Hyphen: out.push_back('-'); break;
      case Separator::Space: out.push_back(' '); break;
      case Separator::None: break;
    }
  }
  out.push_back(']');
  for (EventCode code : group.codes) out += markup(code);
}

}  // namespace

std::string serialize(const Chunk& chunk) {
  std::string out;
  if (chunk.sensitive) out.push_back('<');
  for (const Part& part : chunk.parts) {
    if (const auto* run = std::get_if<LiteralRun>(&part)) {
      out += run->text;
    } else if (const auto* mark = std::get_if<PointMark>(&part)) {
      out += markup(to_code(mark->kind));
    } else {
      write_group(out, std::get<BracketGroup>(part));
    }
  }
  if (chunk.sensitive) out.push_back('>');
  return out;
}

std::string serialize(const Segment& segment) {
  std::string out;
  if (segment.speaker) {
    out += *segment.speaker;
    out.push_back('\t');
  }
  for (std::size_t i = 0; i < segment.chunks.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += serialize(segment.chunks[i]);
  }
  return out;
}

std::string serialize(const Transcript& transcript) {
  std::string out;
  const auto& segments = transcript.segments;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += serialize(segments[i]);
  }
  // An empty final segment needs an explicit terminator to survive parsing.
  if (!segments.empty() && serialize(segments.back()).empty()) out.push_back('\n');
  return out;
}

}  // namespace stutter
