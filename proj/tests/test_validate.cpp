#include <doctest.h>

#include <algorithm>

#include "corpus.hpp"
#include "stutter/validate.hpp"

using namespace stutter;

namespace {

std::vector<Diagnostic> lint(std::string_view text, const RuleSet& rules = RuleSet::defaults()) {
  ParseResult r = parse(text);
  REQUIRE_MESSAGE(r.ok(), text);
  return validate(*r.transcript, rules);
}

std::vector<std::string> ids(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const Diagnostic& d : ds) out.push_back(d.rule_id);
  return out;
}

bool fires(const std::vector<Diagnostic>& ds, std::string_view id) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule_id == id; });
}

}  // namespace

TEST_CASE("W001 flags short word repetition labelled as sound repetition") {
  const auto w001 = RuleSet::only({"W001"});
  const auto ds = lint("[add add]/s add", w001);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule_id == "W001");
  CHECK(ds[0].severity == Severity::Warning);
  CHECK(ds[0].span == SourceSpan::of(0, 11));

  CHECK(lint("[A-a-]/s[add]/radd", w001).empty());
  CHECK(lint("[pr-pr-pr-]/sprepare", w001).empty());
  CHECK(fires(lint("[my-]/smy", w001), "W001"));
  CHECK(fires(lint("[My-my-]/smy name", w001), "W001"));
  CHECK(lint("[my my]/r my name", w001).empty());
}

TEST_CASE("W002 reports digit runs with exact spans") {
  const auto ds = lint("We meet at 2 thirty");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule_id == "W002");
  CHECK(ds[0].span == SourceSpan::of(11, 12));

  const auto many = lint("room 101 and 7b", RuleSet::only({"W002"}));
  REQUIRE(many.size() == 2);
  CHECK(many[0].span == SourceSpan::of(5, 8));
  CHECK(many[1].span == SourceSpan::of(13, 14));
  CHECK(lint("<Room 101>", RuleSet::only({"W002"})).empty());
}

TEST_CASE("W003 flags unredacted identifiers") {
  CHECK(fires(lint("mail jane@example.com"), "W003"));
  CHECK(fires(lint("see www.example"), "W003"));
  CHECK(fires(lint("visit example.org today"), "W003"));
  CHECK_FALSE(fires(lint("mail <jane@example.com>"), "W003"));
  CHECK_FALSE(fires(lint("plain words"), "W003"));
}

TEST_CASE("W004 and W005 sound repetition shape") {
  const auto ds = lint("[sh/p]/s shopping");
  CHECK(ids(ds) == std::vector<std::string>{"W004", "W005"});
  CHECK(lint("[sh-]/sshopping").empty());
  CHECK(ids(lint("[pr pr-]/sprepare")) == std::vector<std::string>{"W004"});
}

TEST_CASE("W006 trailing block") {
  CHECK(ids(lint("hello /b")) == std::vector<std::string>{"W006"});
  CHECK(lint("/bhello").empty());
  CHECK(lint("hel/blo").empty());
}

TEST_CASE("I001 is opt-in") {
  CHECK(lint("M/pommy").empty());
  const auto ds = lint("M/pommy and /bname", RuleSet::all());
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule_id == "I001");
  CHECK(ds[0].severity == Severity::Info);
}

TEST_CASE("parse attaches structural warnings only") {
  ParseResult r = parse("[sh/p]/s shopping at 2");
  REQUIRE(r.ok());
  CHECK(ids(r.diagnostics) == std::vector<std::string>{"W004", "W005"});
  ParseOptions quiet;
  quiet.structural_warnings = false;
  CHECK(parse("[sh/p]/s shopping", quiet).diagnostics.empty());
}

TEST_CASE("rule sets") {
  CHECK(RuleSet::defaults().enabled("W001"));
  CHECK_FALSE(RuleSet::defaults().enabled("I001"));
  CHECK(RuleSet::all().enabled("I001"));
  CHECK_FALSE(RuleSet::none().enabled("W002"));
  CHECK_THROWS_AS(RuleSet::defaults().set("W999", true), UnknownRuleId);
  CHECK_THROWS_AS(RuleSet::only({"nope"}), UnknownRuleId);
  RuleSet r = RuleSet::defaults();
  r.set("W002", false);
  CHECK(lint("at 2", r).empty());
  for (const RuleInfo& info : rule_catalog()) {
    CHECK(find_rule(info.id) == &info);
    CHECK_FALSE(info.guideline.empty());
  }
}

TEST_CASE("published examples are clean apart from known shapes") {
  for (std::string_view line : testing::kGoldenCorpus) {
    for (const Diagnostic& d : lint(line)) {
      INFO(line, " ", d.rule_id);
      CHECK(d.severity != Severity::Error);
    }
  }
  CHECK(lint("[my my]/r my name").empty());
  CHECK(lint("I [uh]/i work").empty());
}

TEST_CASE("validate re-spans hand-built transcripts") {
  Transcript t;
  Segment s;
  Chunk c;
  c.parts.emplace_back(LiteralRun{"at"});
  s.chunks.push_back(c);
  Chunk d;
  d.parts.emplace_back(LiteralRun{"42"});
  s.chunks.push_back(d);
  t.segments.push_back(s);
  const auto ds = validate(t);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].span == SourceSpan::of(3, 5));
}
