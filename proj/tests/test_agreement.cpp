#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stutter/agreement.hpp"

using namespace stutter;

namespace {

Transcript parse_ok(std::string_view text) {
  ParseResult r = parse(text);
  REQUIRE_MESSAGE(r.ok(), text);
  return std::move(*r.transcript);
}

DiffReport diff_of(std::string_view a, std::string_view b) { return diff(parse_ok(a), parse_ok(b)); }

}  // namespace

TEST_CASE("token alignment") {
  const std::vector<std::string> a{"H", "How"}, b{"how"};
  const Alignment al = align_tokens(a, b);
  CHECK(al.cost == 1);
  REQUIRE(al.pairs.size() == 2);
  CHECK(al.pairs[0] == AlignedPair{0, std::nullopt});
  CHECK(al.pairs[1] == AlignedPair{1, 0});

  const std::vector<std::string> empty;
  CHECK(align_tokens(empty, empty).pairs.empty());
  CHECK(align_tokens(a, empty).cost == 2);
}

TEST_CASE("alignment cost matches exhaustive search") {
  std::mt19937 rng(7);
  const std::vector<std::string> vocab{"a", "B", "b", "c", "dd"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> a(rng() % 6), b(rng() % 6);
    for (auto& s : a) s = vocab[rng() % vocab.size()];
    for (auto& s : b) s = vocab[rng() % vocab.size()];
    const Alignment al = align_tokens(a, b);
    CHECK(al.cost == oracle::alignment_cost(a, b));
    std::size_t next_a = 0, next_b = 0;
    for (const AlignedPair& p : al.pairs) {
      if (p.a) CHECK(*p.a == next_a++);
      if (p.b) CHECK(*p.b == next_b++);
      CHECK((p.a || p.b));
    }
    CHECK(next_a == a.size());
    CHECK(next_b == b.size());
  }
}

TEST_CASE("annotator disagreement pairs") {
  SUBCASE("repetition count and word repetition") {
    const DiffReport r = diff_of("[A-A-]/sAdd", "[A-a-]/s[add]/radd");
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].differing_codes == std::vector{EventCode::WordRepetition});
  }
  SUBCASE("block versus sound repetition with prolongation") {
    const DiffReport r = diff_of("sh/bopping", "[sh/p]/s shopping");
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].differing_codes ==
          std::vector{EventCode::Block, EventCode::Prolongation, EventCode::SoundRepetition});
  }
  SUBCASE("elongated repetition") {
    const DiffReport r = diff_of("fr[o-o-o-o-]/som", "fro/pm");
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].differing_codes ==
          std::vector{EventCode::Prolongation, EventCode::SoundRepetition});
  }
  SUBCASE("perceived prolongation") {
    const DiffReport r = diff_of("w/porking", "working");
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].a_markup == "w/porking");
    CHECK(r.entries[0].b_markup == "working");
    CHECK(r.entries[0].differing_codes == std::vector{EventCode::Prolongation});
  }
  SUBCASE("backtracking versus repetition") {
    const DiffReport r = diff_of("[how]/r H/p/bow", "H/b How");
    REQUIRE(r.entries.size() == 2);
    CHECK_FALSE(r.entries[0].a_token.has_value());
    CHECK(r.entries[0].b_markup == "H/b");
    CHECK(r.entries[1].a_markup == "[how]/r H/p/bow");
    CHECK(r.entries[1].b_markup == "How");
  }
}

TEST_CASE("diff is empty exactly for equal transcripts") {
  CHECK(diff_of("[my my]/r my name", "[my my]/r  my name").empty());
  CHECK(diff_of("", "").empty());
  CHECK(diff_of("a", "a\n").empty());
  CHECK_FALSE(diff_of("a", "a\n\n").empty());
  CHECK_FALSE(diff_of("A\thi", "B\thi").empty());
  CHECK_FALSE(diff_of("hi", "[uh]/i hi").empty());
}

TEST_CASE("diff rendering") {
  const std::string text = render_diff(diff_of("w/porking", "working"));
  CHECK(text.find("w/porking") != std::string::npos);
  CHECK(text.find("prolongation") != std::string::npos);
  CHECK(render_diff(diff_of("H/b How", "How")).find("(gap)") != std::string::npos);
}

TEST_CASE("cohen kappa") {
  const LabelVector x{1, 1, 0, 0, 1}, y{1, 0, 0, 0, 1};
  // p_o = 0.8, p_e = 0.48
  CHECK(*cohen_kappa(x, y) == doctest::Approx(0.32 / 0.52).epsilon(1e-12));
  CHECK(*cohen_kappa(x, x) == 1.0);
  const LabelVector ones{1, 1, 1};
  CHECK_FALSE(cohen_kappa(ones, ones).has_value());
  const LabelVector flipped{0, 0, 1, 1, 0};
  CHECK(*cohen_kappa(x, flipped) < 0);
  CHECK_THROWS_AS(cohen_kappa(x, ones), AgreementError);
  const LabelVector none;
  CHECK_THROWS_AS(cohen_kappa(none, none), AgreementError);
  const LabelVector bad{0, 2};
  CHECK_THROWS_AS(cohen_kappa(bad, bad), AgreementError);
}

TEST_CASE("cohen kappa matches the contingency oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    LabelVector x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng() % 2;
      y[i] = rng() % 3 == 0 ? 1 - x[i] : x[i];
    }
    const auto got = cohen_kappa(x, y);
    const auto want = oracle::contingency_kappa(x, y);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::abs(*got - *want) < 1e-12);
  }
}

TEST_CASE("fleiss kappa") {
  const std::vector<std::vector<std::size_t>> counts{{2, 1}, {1, 2}, {3, 0}, {0, 3}};
  // P_bar = (1/3 + 1/3 + 1 + 1) / 4 = 2/3, P_e = 1/2
  CHECK(*fleiss_kappa(counts, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(*fleiss_kappa({{3, 0}, {0, 3}}, 3) == 1.0);
  CHECK_FALSE(fleiss_kappa({{3, 0}, {3, 0}}, 3).has_value());
  CHECK_THROWS_AS(fleiss_kappa({{2, 0}}, 3), AgreementError);
  CHECK_THROWS_AS(fleiss_kappa({}, 3), AgreementError);
}

TEST_CASE("fleiss with two raters tracks the textbook formula") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t items = 1 + rng() % 20;
    const std::size_t raters = 2 + rng() % 5;
    std::vector<std::vector<std::size_t>> counts(items, std::vector<std::size_t>(2));
    for (auto& row : counts) {
      row[1] = rng() % (raters + 1);
      row[0] = raters - row[1];
    }
    const auto got = fleiss_kappa(counts, raters);
    const auto want = oracle::fleiss(counts);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::abs(*got - *want) < 1e-9);
  }
}

TEST_CASE("majority vote") {
  const std::vector<LabelVector> votes{{1, 0, 1}, {1, 1, 0}, {0, 0, 1}};
  CHECK(majority_vote(votes) == LabelVector{1, 0, 1});
  const std::vector<LabelVector> even{{1}, {0}};
  try {
    majority_vote(even);
    FAIL("expected EvenAnnotatorCount");
  } catch (const AgreementError& e) {
    CHECK(e.kind() == AgreementError::Kind::EvenAnnotatorCount);
  }
  const std::vector<LabelVector> ragged{{1, 0}, {1}, {0, 0}};
  CHECK_THROWS_AS(majority_vote(ragged), AgreementError);
}

TEST_CASE("percentages round half up") {
  CHECK(percentage_hundredths(323, 2621) == 1232);
  CHECK(percentage_hundredths(1, 8) == 1250);
  CHECK(percentage_hundredths(1, 16) == 625);
  CHECK(percentage_hundredths(1, 32) == 313);
  CHECK(percentage_hundredths(0, 5) == 0);
  CHECK(format_percentage(1232) == "12.32%");
  CHECK(format_percentage(5) == "0.05%");
  CHECK(format_percentage(10000) == "100.00%");
}

TEST_CASE("confusion counts") {
  const LabelVector ref{1, 1, 0, 0}, cand{1, 0, 1, 0};
  CHECK(confusion_counts(ref, cand) == ConfusionCell{1, 1, 1, 1});

  ClipLabels a, b;
  a.flags[index_of(EventCode::Block)] = true;
  const std::vector<ClipLabels> ra{a, b}, rb{b, b};
  const ConfusionTable t = confusion(ra, rb);
  CHECK(t.total_clips == 2);
  CHECK(t[EventCode::Block].fn == 1);
  CHECK(t.percentage_hundredths(EventCode::Block) == 5000);
  const std::string text = render_confusion_text(t);
  CHECK(text.find("50.00%") != std::string::npos);
  CHECK(text.find("clips: 2") != std::string::npos);
  CHECK(render_confusion_csv(t).rfind("code,tp,fp,fn,tn,total,percentage\n", 0) == 0);
}
