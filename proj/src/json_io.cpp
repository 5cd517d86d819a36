#include "stutter/json_io.hpp"

#include <cmath>

#include "stutter/generated_schema.hpp"

namespace stutter {

using nlohmann::json;

namespace {

std::string_view separator_name(Separator sep) {
  switch (sep) {
    case Separator::Hyphen: return "hyphen";
    case Separator::Space: return "space";
    case Separator::None: return "none";
  }
  return "none";
}

json part_to_json(const Part& part) {
  if (const auto* run = std::get_if<LiteralRun>(&part)) {
    return {{"kind", "literal"}, {"text", run->text}};
  }
  if (const auto* mark = std::get_if<PointMark>(&part)) {
    return {{"kind", mark->kind == PointKind::Block ? "block" : "prolongation"},
            {"offset", mark->offset}};
  }
  const auto& group = std::get<BracketGroup>(part);
  json fragments = json::array();
  for (const Fragment& f : group.fragments) {
    fragments.push_back({{"text", f.text},
                         {"prolongation_offsets", f.prolongation_offsets},
                         {"separator", separator_name(f.trailing_separator)}});
  }
  json codes = json::array();
  for (EventCode code : group.codes) codes.push_back(name(code));
  return {{"kind", "group"}, {"fragments", fragments}, {"codes", codes}, {"attached", group.attached}};
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw JsonFormatError(where + ": " + what);
}

const json& field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string get_string(const json& value, const std::string& where) {
  if (!value.is_string()) fail(where, "expected a string");
  return value.get<std::string>();
}

std::size_t get_index(const json& value, const std::string& where) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
    fail(where, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

const json& get_array(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array");
  return value;
}

Fragment fragment_from_json(const json& j, const std::string& where) {
  Fragment f;
  f.text = get_string(field(j, "text", where), where + ".text");
  const json& offsets = get_array(field(j, "prolongation_offsets", where), where);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    f.prolongation_offsets.push_back(
        get_index(offsets[k], where + ".prolongation_offsets[" + std::to_string(k) + "]"));
  }
  const std::string sep = get_string(field(j, "separator", where), where + ".separator");
  if (sep == "hyphen") {
    f.trailing_separator = Separator::Hyphen;
  } else if (sep == "space") {
    f.trailing_separator = Separator::Space;
  } else if (sep == "none") {
    f.trailing_separator = Separator::None;
  } else {
    fail(where + ".separator", "unknown separator \"" + sep + "\"");
  }
  return f;
}

Part part_from_json(const json& j, const std::string& where) {
  const std::string kind = get_string(field(j, "kind", where), where + ".kind");
  if (kind == "literal") return LiteralRun{get_string(field(j, "text", where), where + ".text")};
  if (kind == "block" || kind == "prolongation") {
    return PointMark{kind == "block" ? PointKind::Block : PointKind::Prolongation,
                     get_index(field(j, "offset", where), where + ".offset")};
  }
  if (kind != "group") fail(where + ".kind", "unknown part kind \"" + kind + "\"");

  BracketGroup group;
  const json& fragments = get_array(field(j, "fragments", where), where + ".fragments");
  for (std::size_t k = 0; k < fragments.size(); ++k) {
    group.fragments.push_back(
        fragment_from_json(fragments[k], where + ".fragments[" + std::to_string(k) + "]"));
  }
  const json& codes = get_array(field(j, "codes", where), where + ".codes");
  for (std::size_t k = 0; k < codes.size(); ++k) {
    const std::string where_code = where + ".codes[" + std::to_string(k) + "]";
    const auto code = code_from_name(get_string(codes[k], where_code));
    if (!code || !is_group_code(*code)) fail(where_code, "not a group event code");
    group.codes.push_back(*code);
  }
  const json& attached = field(j, "attached", where);
  if (!attached.is_boolean()) fail(where + ".attached", "expected a boolean");
  group.attached = attached.get<bool>();
  return group;
}

Segment segment_from_json(const json& j, const std::string& where) {
  Segment segment;
  if (const auto it = j.find("speaker"); it != j.end() && !it->is_null()) {
    segment.speaker = get_string(*it, where + ".speaker");
  }
  if (const auto it = j.find("time_range"); it != j.end() && !it->is_null()) {
    const json& start = field(*it, "start", where + ".time_range");
    const json& end = field(*it, "end", where + ".time_range");
    if (!start.is_number() || !end.is_number()) fail(where + ".time_range", "expected numbers");
    TimeRange range{start.get<double>(), end.get<double>()};
    if (!std::isfinite(range.start) || !std::isfinite(range.end) || range.start < 0 ||
        range.start >= range.end) {
      fail(where + ".time_range", "need finite 0 <= start < end");
    }
    segment.time_range = range;
  }
  const json& chunks = get_array(field(j, "chunks", where), where + ".chunks");
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const std::string where_chunk = where + ".chunks[" + std::to_string(c) + "]";
    Chunk chunk;
    const json& sensitive = field(chunks[c], "sensitive", where_chunk);
    if (!sensitive.is_boolean()) fail(where_chunk + ".sensitive", "expected a boolean");
    chunk.sensitive = sensitive.get<bool>();
    const json& parts = get_array(field(chunks[c], "parts", where_chunk), where_chunk + ".parts");
    for (std::size_t p = 0; p < parts.size(); ++p) {
      chunk.parts.push_back(
          part_from_json(parts[p], where_chunk + ".parts[" + std::to_string(p) + "]"));
    }
    segment.chunks.push_back(std::move(chunk));
  }
  return segment;
}

}  // namespace

json to_json(const Transcript& transcript) {
  json segments = json::array();
  for (const Segment& segment : transcript.segments) {
    json chunks = json::array();
    for (const Chunk& chunk : segment.chunks) {
      json parts = json::array();
      for (const Part& part : chunk.parts) parts.push_back(part_to_json(part));
      chunks.push_back({{"sensitive", chunk.sensitive}, {"parts", parts}});
    }
    json seg = {{"speaker", nullptr}, {"time_range", nullptr}, {"chunks", chunks}};
    if (segment.speaker) seg["speaker"] = *segment.speaker;
    if (segment.time_range) {
      seg["time_range"] = {{"start", segment.time_range->start}, {"end", segment.time_range->end}};
    }
    segments.push_back(std::move(seg));
  }
  json out = {{"segments", segments}};
  if (transcript.source_name) out["source_name"] = *transcript.source_name;
  return out;
}

json to_json(const Diagnostic& d) {
  return {{"severity", to_string(d.severity)},
          {"rule_id", d.rule_id},
          {"message", d.message},
          {"segment", d.segment},
          {"span", {{"begin", d.span.begin}, {"end", d.span.end}}}};
}

Transcript transcript_from_json(const json& j) {
  Transcript transcript;
  if (const auto it = j.find("source_name"); j.is_object() && it != j.end() && !it->is_null()) {
    transcript.source_name = get_string(*it, "$.source_name");
  }
  const json& segments = get_array(field(j, "segments", "$"), "$.segments");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::string where = "$.segments[" + std::to_string(s) + "]";
    Segment segment = segment_from_json(segments[s], where);

    // A structure is valid exactly when its markup re-parses to itself.
    ParseOptions options;
    options.structural_warnings = false;
    options.normalize_nfc = false;
    const ParseResult reparsed = parse_segment(serialize(segment), s, options);
    if (!reparsed.ok() || reparsed.transcript->segments.front().chunks != segment.chunks ||
        reparsed.transcript->segments.front().speaker != segment.speaker) {
      fail(where, "structure violates markup invariants (\"" + serialize(segment) + "\")");
    }
    transcript.segments.push_back(std::move(segment));
  }
  return transcript;
}

Transcript transcript_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw JsonFormatError(std::string("invalid JSON: ") + e.what());
  }
  return transcript_from_json(j);
}

std::string_view transcript_json_schema() { return generated::kTranscriptSchema; }

}  // namespace stutter
