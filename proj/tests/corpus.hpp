#pragma once

#include <array>
#include <string_view>

namespace stutter::testing {

// Published annotation examples, each already in canonical form.
inline constexpr std::array<std::string_view, 24> kGoldenCorpus = {
    // Annotator disagreement pairs, both columns.
    "[A-A-]/sAdd",
    "[A-a-]/s[add]/radd",
    "[how]/r H/p/bow",
    "H/b How",
    "sh/bopping",
    "[sh/p]/s shopping",
    "/b[O-O-]/sOpen",
    "[O-]/sOpen",
    "[Ha-ha-ha-ha-ha-ha-ha-]/shackathon",
    "[ha-]/sha/p[ha-ha-ha-]/skathon",
    "fr[o-o-o-o-]/som",
    "fro/pm",
    "w/porking",
    "working",
    // Event code reference.
    "My /bname",
    "Spa/bghetti",
    "M/pommy",
    "[pr-pr-pr-]/sprepare",
    "[my my]/r my name",
    "I [uh]/i work",
    // Mixed events.
    "[m-m-m-]/sm/py",
    "I [uh uh uh]/r/i /bwork",
    // Fast repetition with prolongation.
    "[n-n-n/p-n-]/snavigate to mom's house",
    "[Aa]/s [add]/r add a pocket projector for Katie to my gift list.",
};

}  // namespace stutter::testing
