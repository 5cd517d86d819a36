#include "stutter/transforms.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "stutter/unicode.hpp"

namespace stutter {
namespace {

std::string_view separator_text(Separator sep) {
  switch (sep) {
    case Separator::Hyphen: return "-";
    case Separator::Space: return " ";
    case Separator::None: return "";
  }
  return "";
}

std::string group_verbatim(const BracketGroup& group) {
  std::string out;
  for (const Fragment& f : group.fragments) {
    out += f.text;
    out += separator_text(f.trailing_separator);
  }
  return out;
}

std::string chunk_verbatim(const Chunk& chunk) {
  std::string out;
  for (const Part& part : chunk.parts) {
    if (const auto* run = std::get_if<LiteralRun>(&part)) {
      out += run->text;
    } else if (const auto* group = std::get_if<BracketGroup>(&part)) {
      out += group_verbatim(*group);
    }
  }
  return out;
}

// Shared walk that joins non-empty chunk renderings with single spaces and
// reports each chunk's starting scalar offset.
template <typename Render, typename Visit>
std::string join_chunks(const Segment& segment, Render render, Visit visit) {
  std::string out;
  std::size_t length = 0;
  for (std::size_t c = 0; c < segment.chunks.size(); ++c) {
    const std::string text = render(segment.chunks[c]);
    if (text.empty()) {
      visit(c, length);
      continue;
    }
    if (!out.empty()) {
      out.push_back(' ');
      ++length;
    }
    visit(c, length);
    out += text;
    length += unicode::length(text);
  }
  return out;
}

template <typename Fn>
std::vector<std::string> per_segment(const Transcript& transcript, Fn fn) {
  std::vector<std::string> out;
  out.reserve(transcript.segments.size());
  for (const Segment& segment : transcript.segments) out.push_back(fn(segment));
  return out;
}

bool is_markup_char(char c) {
  return c == '[' || c == ']' || c == '/' || c == '<' || c == '>';
}

}  // namespace

std::string to_verbatim(const Segment& segment) {
  return join_chunks(segment, chunk_verbatim, [](std::size_t, std::size_t) {});
}

std::string to_semantic(const Chunk& chunk) {
  std::string out;
  for (const Part& part : chunk.parts) {
    if (const auto* run = std::get_if<LiteralRun>(&part)) out += run->text;
  }
  return out;
}

std::string to_semantic(const Segment& segment) {
  return join_chunks(
      segment, [](const Chunk& c) { return to_semantic(c); }, [](std::size_t, std::size_t) {});
}

std::vector<std::string> to_verbatim(const Transcript& transcript) {
  return per_segment(transcript, [](const Segment& s) { return to_verbatim(s); });
}

std::vector<std::string> to_semantic(const Transcript& transcript) {
  return per_segment(transcript, [](const Segment& s) { return to_semantic(s); });
}

std::vector<EventInstance> extract_events(const Segment& segment, std::size_t segment_index) {
  std::vector<EventInstance> events;
  join_chunks(segment, chunk_verbatim, [&](std::size_t c, std::size_t chunk_start) {
    const Chunk& chunk = segment.chunks[c];
    std::size_t cursor = chunk_start;
    for (const Part& part : chunk.parts) {
      if (const auto* run = std::get_if<LiteralRun>(&part)) {
        cursor += unicode::length(run->text);
      } else if (const auto* mark = std::get_if<PointMark>(&part)) {
        events.push_back({to_code(mark->kind), segment_index, c, {cursor, cursor}, 1, {}});
      } else {
        const auto& group = std::get<BracketGroup>(part);
        const std::size_t end = cursor + unicode::length(group_verbatim(group));
        for (EventCode code : group.codes) {
          events.push_back(
              {code, segment_index, c, {cursor, end}, group.fragments.size(), std::nullopt});
        }
        std::size_t inner = cursor;
        for (std::size_t f = 0; f < group.fragments.size(); ++f) {
          const Fragment& fragment = group.fragments[f];
          for (std::size_t offset : fragment.prolongation_offsets) {
            events.push_back({EventCode::Prolongation, segment_index, c,
                              {inner + offset, inner + offset}, 1, f});
          }
          inner += unicode::length(fragment.text) +
                   unicode::length(separator_text(fragment.trailing_separator));
        }
        cursor = end;
      }
    }
  });
  std::stable_sort(events.begin(), events.end(), [](const EventInstance& a, const EventInstance& b) {
    return a.span.begin < b.span.begin;
  });
  return events;
}

std::vector<EventInstance> extract_events(const Transcript& transcript) {
  std::vector<EventInstance> out;
  for (std::size_t s = 0; s < transcript.segments.size(); ++s) {
    auto events = extract_events(transcript.segments[s], s);
    out.insert(out.end(), events.begin(), events.end());
  }
  return out;
}

std::vector<ClipLabels> clip_labels(const Transcript& transcript) {
  std::vector<ClipLabels> out;
  for (std::size_t s = 0; s < transcript.segments.size(); ++s) {
    ClipLabels labels{s, {}};
    for (const EventInstance& e : extract_events(transcript.segments[s], s)) {
      labels.flags[index_of(e.code)] = true;
    }
    out.push_back(labels);
  }
  return out;
}

RedactionPolicy RedactionPolicy::placeholder(std::string token) {
  if (token.empty()) throw std::invalid_argument("redaction placeholder must not be empty");
  for (char c : token) {
    if (is_markup_char(c) || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      throw std::invalid_argument("redaction placeholder \"" + token +
                                  "\" contains markup or whitespace");
    }
  }
  return {Mode::Placeholder, std::move(token)};
}

std::string content_digest(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf, 8);
}

Transcript redact(const Transcript& transcript, const RedactionPolicy& policy) {
  Transcript out = transcript;
  for (Segment& segment : out.segments) {
    if (policy.mode == RedactionPolicy::Mode::Drop) {
      std::erase_if(segment.chunks, [](const Chunk& c) { return c.sensitive; });
      continue;
    }
    for (Chunk& chunk : segment.chunks) {
      if (!chunk.sensitive) continue;
      const std::string original = to_semantic(chunk);
      const std::string replacement =
          policy.mode == RedactionPolicy::Mode::Hash ? content_digest(original) : policy.token;
      chunk.parts = {LiteralRun{replacement}};
      chunk.part_spans.clear();
      chunk.span = {};
    }
  }
  return out;
}

std::string events_to_csv(const std::vector<EventInstance>& events) {
  std::string out = "segment,code,start,end,count\n";
  for (const EventInstance& e : events) {
    out += std::to_string(e.segment_index) + ',' + std::string(name(e.code)) + ',' +
           std::to_string(e.span.begin) + ',' + std::to_string(e.span.end) + ',' +
           std::to_string(e.repetition_count) + '\n';
  }
  return out;
}

std::string events_to_json_lines(const std::vector<EventInstance>& events) {
  std::string out;
  for (const EventInstance& e : events) {
    nlohmann::json line = {{"segment", e.segment_index}, {"chunk", e.chunk_index},
                           {"code", name(e.code)},       {"start", e.span.begin},
                           {"end", e.span.end},          {"count", e.repetition_count}};
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace stutter
