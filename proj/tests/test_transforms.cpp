#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "stutter/transforms.hpp"

using namespace stutter;

namespace {

Transcript parse_ok(std::string_view text) {
  ParseResult r = parse(text);
  REQUIRE_MESSAGE(r.ok(), text);
  return std::move(*r.transcript);
}

std::string verbatim(std::string_view text) { return to_verbatim(parse_ok(text).segments.at(0)); }
std::string semantic(std::string_view text) { return to_semantic(parse_ok(text).segments.at(0)); }

}  // namespace

TEST_CASE("verbatim rendering") {
  CHECK(verbatim("[pr-pr-pr-]/sprepare") == "pr-pr-pr-prepare");
  CHECK(verbatim("[my my]/r my name") == "my my my name");
  CHECK(verbatim("I [uh uh uh]/r/i /bwork") == "I uh uh uh work");
  CHECK(verbatim("[m-m-m-]/sm/py") == "m-m-m-my");
  CHECK(verbatim("[n-n-n/p-n-]/snavigate to mom's house") == "n-n-n-n-navigate to mom's house");
  CHECK(verbatim("My /bname") == "My name");
  CHECK(verbatim("a /b c") == "a c");
  CHECK(verbatim("call <Jane Doe>") == "call Jane Doe");
}

TEST_CASE("semantic rendering") {
  CHECK(semantic("[pr-pr-pr-]/sprepare") == "prepare");
  CHECK(semantic("I [uh]/i work") == "I work");
  CHECK(semantic("[my my]/r my name") == "my name");
  CHECK(semantic("[ha-]/sha/p[ha-ha-ha-]/skathon") == "hakathon");
  CHECK(semantic("[uh]/i") == "");
  CHECK(to_semantic(parse_ok("")).empty());
}

TEST_CASE("renderings agree with deletion oracles on the corpus") {
  for (std::string_view line : testing::kGoldenCorpus) {
    INFO(line);
    CHECK(verbatim(line) == oracle::verbatim(std::string(line)));
    CHECK(semantic(line) == oracle::semantic(std::string(line)));
  }
}

TEST_CASE("event extraction") {
  const auto events = extract_events(parse_ok("[pr-pr-pr-]/sprepare"));
  REQUIRE(events.size() == 1);
  CHECK(events[0].code == EventCode::SoundRepetition);
  CHECK(events[0].span == CharSpan{0, 9});
  CHECK(events[0].repetition_count == 3);

  const auto mixed = extract_events(parse_ok("[m-m-m-]/sm/py"));
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0].code == EventCode::SoundRepetition);
  CHECK(mixed[0].span == CharSpan{0, 6});
  CHECK(mixed[1].code == EventCode::Prolongation);
  CHECK(mixed[1].span == CharSpan{7, 7});

  const auto two = extract_events(parse_ok("x\nI [uh uh uh]/r/i /bwork"));
  REQUIRE(two.size() == 3);
  CHECK(two[0].segment_index == 1);
  CHECK(two[0].code == EventCode::WordRepetition);
  CHECK(two[1].code == EventCode::Interjection);
  CHECK(two[0].span == CharSpan{2, 10});
  CHECK(two[2].code == EventCode::Block);
  CHECK(two[2].span == CharSpan{11, 11});
  CHECK(two[2].chunk_index == 2);

  const auto inner = extract_events(parse_ok("[n-n-n/p-n-]/snavigate"));
  REQUIRE(inner.size() == 2);
  CHECK(inner[0].code == EventCode::SoundRepetition);
  CHECK(inner[1].code == EventCode::Prolongation);
  CHECK(inner[1].fragment_index == 2);
  CHECK(inner[1].span == CharSpan{5, 5});
}

TEST_CASE("events count matches codes in markup") {
  for (std::string_view line : testing::kGoldenCorpus) {
    INFO(line);
    CHECK(extract_events(parse_ok(line)).size() == oracle::count_codes(std::string(line)));
  }
}

TEST_CASE("clip labels") {
  const auto labels = clip_labels(parse_ok("I [uh]/i work\n\nM/pommy /bthere"));
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].has(EventCode::Interjection));
  CHECK_FALSE(labels[0].has(EventCode::Block));
  CHECK(labels[1].flags == std::array<bool, 5>{});
  CHECK(labels[2].has(EventCode::Prolongation));
  CHECK(labels[2].has(EventCode::Block));
  CHECK(labels[2].segment_index == 2);
}

TEST_CASE("redaction") {
  const Transcript t = parse_ok("call <Jane Doe> now\n<Ann>");
  const Transcript placeholder = redact(t, RedactionPolicy::placeholder("NAME"));
  CHECK(serialize(placeholder) == "call <NAME> now\n<NAME>");

  const Transcript dropped = redact(t, RedactionPolicy::drop());
  CHECK(serialize(dropped) == "call now\n\n");

  CHECK(content_digest("") == "cbf29ce4");
  CHECK(content_digest("a") == "af63dc4c");
  const Transcript hashed = redact(t, RedactionPolicy::hash());
  CHECK(to_verbatim(hashed)[1] == content_digest("Ann"));

  CHECK_THROWS_AS(RedactionPolicy::placeholder(""), std::invalid_argument);
  CHECK_THROWS_AS(RedactionPolicy::placeholder("a b"), std::invalid_argument);
}

TEST_CASE("event listings") {
  const auto events = extract_events(parse_ok("M/pommy"));
  CHECK(events_to_csv(events) == "segment,code,start,end,count\n0,prolongation,1,1,1\n");
  CHECK(events_to_json_lines(events) ==
        "{\"chunk\":0,\"code\":\"prolongation\",\"count\":1,\"end\":1,\"segment\":0,\"start\":1}\n");
}
