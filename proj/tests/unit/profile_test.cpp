#include <doctest.h>

#include "metricfair/generators.hpp"
#include "metricfair/profile.hpp"
#include "support/fixtures.hpp"

using namespace metricfair;
using testing::condorcet_cycle;
using testing::profile_of;

namespace {

std::vector<std::vector<Alternative>> orders(const Profile& p) {
  std::vector<std::vector<Alternative>> out;
  for (const Ranking& r : p.rankings()) out.emplace_back(r.order().begin(), r.order().end());
  return out;
}

std::size_t error_line(std::string_view text) {
  try {
    parse_profile(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse a two-agent profile") {
  const Profile p = parse_profile("2 2\n0 c1\n1 c2\n1,0\n0,1\n");
  CHECK(p.num_agents() == 2);
  CHECK(p.num_alternatives() == 2);
  CHECK(orders(p) == std::vector<std::vector<Alternative>>{{1, 0}, {0, 1}});
  CHECK(p.label(1) == "c2");
}

TEST_CASE("line family file") {
  const Profile p = read_profile_file(METRICFAIR_TEST_DATA "/line3.profile");
  CHECK(orders(p) == std::vector<std::vector<Alternative>>{{1, 0}, {0, 1}, {0, 1}});
  CHECK(p == line_family(3).profile);
}

TEST_CASE("names are optional and blank lines, comments are skipped") {
  const Profile p = parse_profile("# hi\n\n3 1\n0\n1 mid\n2\n  2 , 1 ,0  # trailing\n");
  CHECK(p.label(0) == "0");
  CHECK(p.label(1) == "mid");
  CHECK(p.ranking(0).top() == 2);
  CHECK(p.find_alternative("mid") == std::optional<Alternative>(1));
  CHECK(p.find_alternative("2") == std::optional<Alternative>(2));
  CHECK_FALSE(p.find_alternative("7"));
}

TEST_CASE("parse errors report the offending line") {
  CHECK(error_line("3 1\n0\n1\n2\n0,0,1\n") == 5);   // duplicate
  CHECK(error_line("3 1\n0\n1\n2\n0,1\n") == 5);     // incomplete
  CHECK(error_line("3 1\n0\n1\n2\n0,1,5\n") == 5);   // out of range
  CHECK(error_line("3 x\n") == 1);
  CHECK(error_line("2 2\n0\n1\n0,1\n") == 4);        // too few rankings
  CHECK(error_line("2 1\n0\n1\n0,1\n1,0\n") == 5);   // too many
  CHECK(error_line("2 1\n0\n0\n0,1\n") == 3);        // alternative listed twice
  try {
    read_profile_file(METRICFAIR_TEST_DATA "/bad_ranking.profile");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
    CHECK(std::string(e.what()).find("line 8") == 0);
  }
  CHECK_THROWS_AS(read_profile_file("/nonexistent/file"), ParseError);
}

TEST_CASE("ranking validation") {
  CHECK_THROWS_AS(Ranking({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Ranking({}), std::invalid_argument);
  CHECK_THROWS_AS(Profile(3, {Ranking({0, 1})}), std::invalid_argument);
}

TEST_CASE("prefers") {
  const Profile line = line_family(3).profile;
  CHECK(line.prefers(0, 1, 0));
  const Profile cyc = condorcet_cycle();
  CHECK_FALSE(cyc.prefers(1, 0, 2));
  CHECK_THROWS_AS(cyc.prefers(3, 0, 1), std::out_of_range);
  // antisymmetry over a random profile
  Rng rng(5);
  const Profile p = random_profile(4, 5, rng);
  for (Agent v = 0; v < 4; ++v) {
    for (Alternative a = 0; a < 5; ++a) {
      for (Alternative b = 0; b < 5; ++b) {
        if (a != b) CHECK(p.prefers(v, a, b) != p.prefers(v, b, a));
      }
    }
  }
}

TEST_CASE("pairwise counts") {
  const PairwiseMatrix cyc(condorcet_cycle());
  CHECK(cyc.wins(0, 1) == 2);
  CHECK(cyc.wins(1, 2) == 2);
  CHECK(cyc.wins(2, 0) == 2);
  CHECK(cyc.beats(0, 1));
  CHECK_FALSE(cyc.beats(1, 0));

  const PairwiseMatrix u(testing::unanimous(4, 3));
  CHECK(u.wins(0, 1) == 4);
  CHECK(u.wins(0, 2) == 4);

  const PairwiseMatrix line(line_family(3).profile);
  CHECK(line.wins(0, 1) == 2);
  CHECK(line.wins(1, 0) == 1);

  // exactly N/2: the lower index wins
  const PairwiseMatrix tie(profile_of(2, {{0, 1}, {1, 0}}));
  CHECK(tie.is_tie(0, 1));
  CHECK(tie.beats(0, 1));
  CHECK_FALSE(tie.beats(1, 0));
}

TEST_CASE("pairwise property: wins(i,j) + wins(j,i) = N") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Profile p = random_profile(1 + rng.below(6), 1 + rng.below(5), rng);
    const PairwiseMatrix w(p);
    for (Alternative i = 0; i < p.num_alternatives(); ++i) {
      for (Alternative j = 0; j < p.num_alternatives(); ++j) {
        if (i == j) continue;
        CHECK(w.wins(i, j) + w.wins(j, i) == p.num_agents());
        CHECK(w.beats(i, j) != w.beats(j, i));
      }
    }
  }
}

TEST_CASE("serialize round-trips") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Profile p = random_profile(1 + rng.below(5), 1 + rng.below(6), rng);
    CHECK(parse_profile(serialize_profile(p)) == p);
  }
  const Profile named = condorcet_cycle();
  CHECK(parse_profile(serialize_profile(named)).names() == named.names());
}

TEST_CASE("restriction re-indexes densely") {
  const Profile p = condorcet_cycle();
  const std::vector<Alternative> keep{2, 0};
  const RestrictedProfile r = restrict_profile(p, keep);
  CHECK(r.original == std::vector<Alternative>{0, 2});
  CHECK(orders(r.profile) == std::vector<std::vector<Alternative>>{{0, 1}, {1, 0}, {1, 0}});
  CHECK(r.profile.label(1) == "c");
}

TEST_CASE("PrefLib conversion") {
  const std::string text = R"(# NUMBER ALTERNATIVES: 3
# NUMBER VOTERS: 3
2: 1,2,3
1: 3,1,2
)";
  const Profile p = parse_preflib_soc(text);
  CHECK(orders(p) == std::vector<std::vector<Alternative>>{{0, 1, 2}, {0, 1, 2}, {2, 0, 1}});

  auto line_of = [](std::string_view bad) -> std::size_t {
    try {
      parse_preflib_soc(bad);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("# NUMBER ALTERNATIVES: 4\n1: 1,2,3\n") > 0);   // header mismatch
  CHECK(line_of("# NUMBER ALTERNATIVES: 3\n1: 1,2,3\n2:\n") == 3);  // empty ballot
  CHECK(line_of("# NUMBER ALTERNATIVES: 3\n1: 1,{2,3}\n") == 2);   // weak order
  CHECK(line_of("# NUMBER ALTERNATIVES: 2\n# NUMBER VOTERS: 3\n1: 1,2\n") > 0);
}
