#include "stutter/textgrid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "stutter/transforms.hpp"
#include "stutter/unicode.hpp"

namespace stutter::textgrid {
namespace {

using Kind = TextGridError::Kind;

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token, Kind kind = Kind::Malformed) {
    if (!accept(token)) fail(kind, "expected \"" + std::string(token) + "\"");
  }

  // `key = ` prefix of a labelled field.
  void label(std::string_view key) {
    expect(key);
    expect("=");
  }

  double number() {
    skip_space();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || !std::isfinite(value)) fail(Kind::Malformed, "expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::size_t count() {
    const double value = number();
    if (value < 0 || value != std::floor(value)) fail(Kind::Malformed, "expected a count");
    return static_cast<std::size_t>(value);
  }

  std::string quoted() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail(Kind::Malformed, "expected a quoted string");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(Kind::Malformed, "unterminated string");
      const char c = text_[pos_++];
      if (c != '"') {
        out.push_back(c);
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == '"') {
        out.push_back('"');
        ++pos_;
        continue;
      }
      return out;
    }
  }

  std::size_t line() const {
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + pos_, '\n'));
  }

  [[noreturn]] void fail(Kind kind, const std::string& what) const {
    throw TextGridError(kind, "TextGrid line " + std::to_string(line()) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

void check_tier(const Tier& tier, const Document& doc) {
  if (!(tier.xmin < tier.xmax) && !(tier.xmin == tier.xmax && tier.intervals.empty())) {
    throw TextGridError(Kind::Malformed, "tier \"" + tier.name + "\" has xmin >= xmax");
  }
  if (tier.xmin < doc.xmin || tier.xmax > doc.xmax) {
    throw TextGridError(Kind::Malformed, "tier \"" + tier.name + "\" extends beyond the document");
  }
  double previous_end = tier.xmin;
  for (std::size_t k = 0; k < tier.intervals.size(); ++k) {
    const Interval& iv = tier.intervals[k];
    const std::string where =
        "tier \"" + tier.name + "\" interval " + std::to_string(k + 1) + ": ";
    if (!(iv.xmin < iv.xmax)) {
      throw TextGridError(Kind::NonMonotonicIntervals, where + "xmin must be below xmax");
    }
    if (iv.xmin < previous_end) {
      throw TextGridError(Kind::NonMonotonicIntervals,
                          where + "starts before the previous interval ends");
    }
    if (iv.xmax > tier.xmax) {
      throw TextGridError(Kind::NonMonotonicIntervals, where + "ends after the tier");
    }
    previous_end = iv.xmax;
  }
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  return out;
}

}  // namespace

const Tier* Document::find_tier(std::string_view tier_name) const {
  for (const Tier& tier : tiers) {
    if (tier.name == tier_name) return &tier;
  }
  return nullptr;
}

Document read(std::string_view bytes) {
  const std::string text = unicode::bytes_to_utf8(bytes);
  Scanner in(text);

  in.expect("File type", Kind::MalformedHeader);
  in.expect("=", Kind::MalformedHeader);
  if (in.peek() != '"' || in.quoted() != "ooTextFile") {
    in.fail(Kind::MalformedHeader, "missing \"ooTextFile\" file type");
  }
  in.expect("Object class", Kind::MalformedHeader);
  in.expect("=", Kind::MalformedHeader);
  if (in.peek() != '"' || in.quoted() != "TextGrid") {
    in.fail(Kind::MalformedHeader, "object class is not \"TextGrid\"");
  }

  const char next = in.peek();
  if ((next >= '0' && next <= '9') || next == '-' || next == '.') {
    in.fail(Kind::UnsupportedFormat, "short text format is not supported; save as long text");
  }

  Document doc;
  in.label("xmin");
  doc.xmin = in.number();
  in.label("xmax");
  doc.xmax = in.number();
  in.expect("tiers?");
  if (in.accept("<absent>")) {
    if (!in.at_end()) in.fail(Kind::Malformed, "unexpected content after <absent>");
    return doc;
  }
  in.expect("<exists>");
  in.label("size");
  const std::size_t tier_count = in.count();
  in.expect("item");
  in.expect("[");
  in.expect("]");
  in.expect(":");

  for (std::size_t t = 1; t <= tier_count; ++t) {
    in.expect("item");
    in.expect("[");
    if (in.count() != t) in.fail(Kind::Malformed, "tier items out of order");
    in.expect("]");
    in.expect(":");
    in.label("class");
    const std::string tier_class = in.quoted();
    if (tier_class == "TextTier") {
      in.fail(Kind::UnsupportedTierClass,
              "point tiers (TextTier) are not supported; only IntervalTier is");
    }
    if (tier_class != "IntervalTier") {
      in.fail(Kind::UnsupportedTierClass, "unsupported tier class \"" + tier_class + "\"");
    }
    Tier tier;
    in.label("name");
    tier.name = in.quoted();
    in.label("xmin");
    tier.xmin = in.number();
    in.label("xmax");
    tier.xmax = in.number();
    in.expect("intervals");
    in.expect(":");
    in.label("size");
    const std::size_t interval_count = in.count();
    for (std::size_t k = 1; k <= interval_count; ++k) {
      in.expect("intervals");
      in.expect("[");
      if (in.count() != k) in.fail(Kind::Malformed, "intervals out of order");
      in.expect("]");
      in.expect(":");
      Interval iv;
      in.label("xmin");
      iv.xmin = in.number();
      in.label("xmax");
      iv.xmax = in.number();
      in.label("text");
      iv.text = in.quoted();
      tier.intervals.push_back(std::move(iv));
    }
    doc.tiers.push_back(std::move(tier));
  }
  if (!in.at_end()) in.fail(Kind::Malformed, "unexpected content after the last tier");
  if (doc.xmin > doc.xmax) throw TextGridError(Kind::Malformed, "document xmin exceeds xmax");
  for (const Tier& tier : doc.tiers) check_tier(tier, doc);
  return doc;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  if (const auto dot = out.find('.'); dot != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

std::string write(const Document& doc) {
  std::string out;
  const auto line = [&](std::string_view indent, std::string_view content) {
    out += indent;
    out += content;
    out += '\n';
  };
  const auto num = [](double v) { return format_number(v) + " "; };
  const auto str = [](std::string_view s) { return "\"" + escape(s) + "\" "; };

  line("", "File type = \"ooTextFile\"");
  line("", "Object class = \"TextGrid\"");
  line("", "");
  line("", "xmin = " + num(doc.xmin));
  line("", "xmax = " + num(doc.xmax));
  if (doc.tiers.empty()) {
    line("", "tiers? <absent> ");
    return out;
  }
  line("", "tiers? <exists> ");
  line("", "size = " + std::to_string(doc.tiers.size()) + " ");
  line("", "item []: ");
  for (std::size_t t = 0; t < doc.tiers.size(); ++t) {
    const Tier& tier = doc.tiers[t];
    line("    ", "item [" + std::to_string(t + 1) + "]:");
    line("        ", "class = \"IntervalTier\" ");
    line("        ", "name = " + str(tier.name));
    line("        ", "xmin = " + num(tier.xmin));
    line("        ", "xmax = " + num(tier.xmax));
    line("        ", "intervals: size = " + std::to_string(tier.intervals.size()) + " ");
    for (std::size_t k = 0; k < tier.intervals.size(); ++k) {
      const Interval& iv = tier.intervals[k];
      line("        ", "intervals [" + std::to_string(k + 1) + "]:");
      line("            ", "xmin = " + num(iv.xmin));
      line("            ", "xmax = " + num(iv.xmax));
      line("            ", "text = " + str(iv.text));
    }
  }
  return out;
}

ImportResult import_transcript_lenient(const Document& doc, std::string_view tier_name) {
  const Tier* tier = doc.find_tier(tier_name);
  if (!tier) {
    throw TextGridError(Kind::TierNotFound, "no tier named \"" + std::string(tier_name) + "\"");
  }
  ImportResult result;
  for (std::size_t k = 0; k < tier->intervals.size(); ++k) {
    const Interval& iv = tier->intervals[k];
    if (blank(iv.text)) continue;
    std::string text = iv.text;
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');

    const std::size_t index = result.transcript.segments.size();
    ParseResult parsed = parse_segment(text, index);
    if (!parsed.ok()) {
      for (Diagnostic& d : parsed.diagnostics) {
        d.segment = k;
        result.errors.push_back(std::move(d));
      }
      continue;
    }
    Segment segment = std::move(parsed.transcript->segments.front());
    segment.time_range = TimeRange{iv.xmin, iv.xmax};
    result.transcript.segments.push_back(std::move(segment));
    result.interval_of_segment.push_back(k);
    for (Diagnostic& d : parsed.diagnostics) result.warnings.push_back(std::move(d));
  }
  return result;
}

ImportResult import_transcript(const Document& doc, std::string_view tier_name) {
  ImportResult result = import_transcript_lenient(doc, tier_name);
  if (result.errors.empty()) return result;
  const Tier* tier = doc.find_tier(tier_name);
  std::string message;
  for (const Diagnostic& d : result.errors) {
    const Interval& iv = tier->intervals[d.segment];
    if (!message.empty()) message += "\n";
    message += "interval " + std::to_string(d.segment + 1) + " [" + format_number(iv.xmin) + ", " +
               format_number(iv.xmax) + "] col " + std::to_string(d.span.begin + 1) + ": " +
               d.rule_id + ": " + d.message;
  }
  throw TextGridError(Kind::ParseErrors, message);
}

Document export_transcript(const Transcript& transcript, TimeRange range) {
  if (!(range.start < range.end)) {
    throw TextGridError(Kind::Malformed, "document range must have start < end");
  }
  std::vector<std::size_t> order(transcript.segments.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Segment& s = transcript.segments[i];
    if (!s.time_range) {
      throw TextGridError(Kind::MissingTimestamps,
                          "segment " + std::to_string(i + 1) + " has no time range");
    }
    if (s.time_range->start < range.start || s.time_range->end > range.end) {
      throw TextGridError(Kind::MissingTimestamps,
                          "segment " + std::to_string(i + 1) + " lies outside the document range");
    }
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return transcript.segments[a].time_range->start < transcript.segments[b].time_range->start;
  });

  Tier annotation{std::string(kAnnotationTier), range.start, range.end, {}};
  Tier events{std::string(kEventsTier), range.start, range.end, {}};
  const auto add = [&](double from, double to, std::string markup, std::string codes) {
    annotation.intervals.push_back({from, to, std::move(markup)});
    events.intervals.push_back({from, to, std::move(codes)});
  };

  double cursor = range.start;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Segment& s = transcript.segments[order[k]];
    const TimeRange tr = *s.time_range;
    if (tr.start < cursor) {
      throw TextGridError(Kind::OverlappingSegments,
                          "segment " + std::to_string(order[k] + 1) + " overlaps its predecessor");
    }
    if (tr.start > cursor) add(cursor, tr.start, "", "");

    std::vector<EventCode> seen;
    for (const EventInstance& e : extract_events(s, order[k])) {
      if (std::find(seen.begin(), seen.end(), e.code) == seen.end()) seen.push_back(e.code);
    }
    std::string codes;
    for (EventCode code : seen) {
      if (!codes.empty()) codes += ';';
      codes += name(code);
    }
    add(tr.start, tr.end, serialize(s), std::move(codes));
    cursor = tr.end;
  }
  if (cursor < range.end) add(cursor, range.end, "", "");

  Document doc{range.start, range.end, {}};
  doc.tiers.push_back(std::move(annotation));
  doc.tiers.push_back(std::move(events));
  return doc;
}

std::vector<GapFinding> gap_lint(const Document& doc, std::string_view tier_name,
                                 double threshold_seconds) {
  const Tier* tier = doc.find_tier(tier_name);
  if (!tier) {
    throw TextGridError(Kind::TierNotFound, "no tier named \"" + std::string(tier_name) + "\"");
  }
  if (!(threshold_seconds > 0)) {
    throw TextGridError(Kind::NonPositiveThreshold, "gap threshold must be positive");
  }
  constexpr double kTolerance = 1e-9;
  std::vector<GapFinding> findings;
  const auto consider = [&](double from, double to, const std::string& before,
                            const std::string& after) {
    if (to > from && to - from >= threshold_seconds - kTolerance) {
      findings.push_back({tier->name, from, to, to - from, before, after});
    }
  };

  double cursor = tier->xmin;
  std::string previous;
  for (const Interval& iv : tier->intervals) {
    if (blank(iv.text)) continue;
    consider(cursor, iv.xmin, previous, iv.text);
    cursor = std::max(cursor, iv.xmax);
    previous = iv.text;
  }
  consider(cursor, tier->xmax, previous, "");
  return findings;
}

}  // namespace stutter::textgrid
