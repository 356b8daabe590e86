#include <doctest.h>

#include "metricfair/generators.hpp"
#include "metricfair/oracle.hpp"
#include "metricfair/worst_case.hpp"
#include "support/fixtures.hpp"

using namespace metricfair;
using testing::q;
using testing::set_of;

TEST_CASE("two-agent line profile, default grid") {
  // x = d(v',c1) = d(v',c2), y = d(v1,c2), d(v1,c1) <= min(3, 2x + y): the
  // ratio (d(v1,c1) + x)/(x + y) peaks on the grid at x = 5/4, y = 1/4.
  const OracleResult r = oracle_worst_ratio(line_family(2).profile, set_of({0}), OracleMode::Distortion);
  CHECK(r.value == Ratio(q(8, 3)));
  REQUIRE(r.witness);
  CHECK(r.witness->at(0, 1) == q(1, 4));
  CHECK(r.metrics_examined > 0);
}

TEST_CASE("two-agent line profile, grid with zero reaches the engine value") {
  const Profile p = line_family(2).profile;
  const OracleResult d = oracle_worst_ratio(p, set_of({0}), OracleMode::Distortion, GridSearchConfig::with_zero());
  CHECK(d.value == Ratio(q(3)));
  CHECK(d.value == worst_distortion(p, set_of({0})).value);
  const OracleResult f = oracle_worst_ratio(p, set_of({0}), OracleMode::Fairness, GridSearchConfig::with_zero());
  CHECK(f.value >= Ratio(q(3)));
  CHECK(f.value == worst_fairness(p, set_of({0})).value);
}

TEST_CASE("unbounded pairs show up as infinite with a zero in the grid") {
  const Profile p = testing::all_prefer_second(2);
  const OracleResult r = oracle_worst_ratio(p, set_of({0}), OracleMode::Fairness, GridSearchConfig::with_zero());
  CHECK(r.value.is_infinite());
}

TEST_CASE("unanimous profiles") {
  const Profile p = testing::unanimous(2, 2);
  for (OracleMode mode : {OracleMode::Distortion, OracleMode::Fairness}) {
    CHECK(oracle_worst_ratio(p, set_of({0}), mode).value == Ratio(q(1)));
  }
}

TEST_CASE("the oracle never exceeds the engine") {
  Rng rng(6);
  GridSearchConfig coarse;
  coarse.grid = {q(0), q(1), q(2), q(3)};
  for (int trial = 0; trial < 12; ++trial) {
    const Profile p = random_profile(1 + rng.below(2), 2 + rng.below(2), rng);
    const Alternative c = rng.below(p.num_alternatives());
    CAPTURE(serialize_profile(p));
    CHECK(oracle_worst_ratio(p, set_of({c}), OracleMode::Distortion, coarse).value <=
          worst_distortion(p, set_of({c})).value);
    CHECK(oracle_worst_ratio(p, set_of({c}), OracleMode::Fairness, coarse).value <=
          worst_fairness(p, set_of({c})).value);
  }
}

TEST_CASE("threads do not change the answer") {
  const Profile p = line_family(3).profile;
  GridSearchConfig one = GridSearchConfig::with_zero(), many = GridSearchConfig::with_zero();
  many.jobs = 4;
  const OracleResult a = oracle_worst_ratio(p, set_of({0}), OracleMode::Fairness, one);
  const OracleResult b = oracle_worst_ratio(p, set_of({0}), OracleMode::Fairness, many);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK(a.metrics_examined == b.metrics_examined);
}

TEST_CASE("configuration errors") {
  const Profile p = testing::unanimous(4, 4);
  CHECK_THROWS_AS(oracle_worst_ratio(p, set_of({0}), OracleMode::Distortion), EnumerationCapError);
  GridSearchConfig bad;
  bad.grid = {q(2), q(1)};
  CHECK_THROWS_AS(oracle_worst_ratio(testing::unanimous(1, 1), set_of({0}), OracleMode::Distortion, bad),
                  std::invalid_argument);
  bad.grid = {q(-1)};
  CHECK_THROWS_AS(oracle_worst_ratio(testing::unanimous(1, 1), set_of({0}), OracleMode::Distortion, bad),
                  std::invalid_argument);
}
