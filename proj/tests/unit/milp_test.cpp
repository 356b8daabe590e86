#include <doctest.h>

#include <cmath>

#include "metricfair/generators.hpp"
#include "metricfair/lp.hpp"
#include "metricfair/worst_case.hpp"
#include "support/fixtures.hpp"
#include "support/milp_enumeration.hpp"
#include "support/random_programs.hpp"

using namespace metricfair;
using namespace metricfair::lp;
using testing::q;

namespace {

MilpProblem packing() {
  LinearProgram lp(2);
  lp.set_objective({q(1), q(1)});
  lp.add_constraint({q(1), q(1)}, Relation::LessEqual, q(1));
  lp.set_upper_bound(0, q(1));
  lp.set_upper_bound(1, q(1));
  return {lp, {0, 1}};
}

}  // namespace

TEST_CASE("small binary programs") {
  const Solution s = solve_milp(packing());
  CHECK(s.status == Status::Optimal);
  CHECK(s.objective == 1);

  LinearProgram single(1);
  single.set_objective({q(1)});
  single.add_constraint({q(1)}, Relation::LessEqual, q(1));
  const Solution one = solve_milp({single, {0}});
  CHECK(one.objective == 1);
  CHECK(one.node_count == 1);
}

TEST_CASE("fractional relaxation forces branching") {
  // max b0 + b1 + b2 s.t. 2(b0 + b1 + b2) <= 3
  LinearProgram lp(3);
  lp.set_objective({q(1), q(1), q(1)});
  lp.add_constraint({q(2), q(2), q(2)}, Relation::LessEqual, q(3));
  for (std::size_t j = 0; j < 3; ++j) lp.set_upper_bound(j, q(1));
  const Solution s = solve_milp({lp, {0, 1, 2}});
  CHECK(s.objective == 1);
  CHECK(s.node_count > 1);
  for (const Rational& v : s.values) CHECK((v == 0 || v == 1));
}

TEST_CASE("cutoff prunes to Dominated") {
  const Solution s = solve_milp(packing(), {Mode::Rational, q(1)});
  CHECK(s.status == Status::Dominated);
  const Solution beaten = solve_milp(packing(), {Mode::Rational, q(1, 2)});
  CHECK(beaten.status == Status::Optimal);
  CHECK(beaten.objective == 1);
}

TEST_CASE("unbounded and infeasible programs") {
  LinearProgram lp(2);
  lp.set_objective({q(0), q(1)});
  lp.set_upper_bound(0, q(1));
  const Solution u = solve_milp({lp, {0}});
  CHECK(u.status == Status::Unbounded);

  LinearProgram none(1);
  none.add_constraint({q(2)}, Relation::Equal, q(1));
  none.set_upper_bound(0, q(1));
  CHECK(solve_milp({none, {0}}).status == Status::Infeasible);
}

TEST_CASE("float mode refuses huge coefficients") {
  LinearProgram lp(1);
  lp.set_objective({integer_power(2, 41)});
  lp.set_upper_bound(0, q(1));
  CHECK_THROWS_AS(solve_milp({lp, {0}}, {Mode::Float}), std::domain_error);
  CHECK(solve_milp({lp, {0}}).objective == integer_power(2, 41));
}

TEST_CASE("random programs match exhaustive enumeration") {
  Rng rng(31337);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const MilpProblem problem =
        testing::random_milp(rng, 1 + rng.below(8), rng.below(3), 1 + rng.below(5));
    const testing::EnumerationResult expected = testing::enumerate_milp(problem, testing::Residual::Vertices);
    const Solution exact = solve_milp(problem);
    const Solution fast = solve_milp(problem, {Mode::Float});
    CAPTURE(trial);
    if (!expected.best) {
      CHECK(exact.status == Status::Infeasible);
      CHECK(fast.status == Status::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(exact.status == Status::Optimal);
    CHECK(exact.objective == *expected.best);
    CHECK(problem.base.max_violation(exact.values) == 0);
    for (std::size_t b : problem.binary_vars) CHECK((exact.values[b] == 0 || exact.values[b] == 1));
    REQUIRE(fast.status == Status::Optimal);
    CHECK(std::abs(to_double(fast.objective - *expected.best)) < 1e-6);
  }
  CHECK(feasible > 40);
}

TEST_CASE("fairness program for the three-agent line profile, k = 1") {
  const Profile p = line_family(3).profile;
  const ConsistencySystem system = build_consistency_system(p);
  const MilpProblem milp = build_fairness_milp(system, testing::set_of({0}), testing::set_of({1}), 1, big_m(2));
  const testing::EnumerationResult expected = testing::enumerate_milp(milp, testing::Residual::SolveLp);
  REQUIRE(expected.best);
  CHECK_FALSE(expected.unbounded);
  CHECK(*expected.best == 3);
  const Solution s = solve_milp(milp);
  CHECK(s.status == Status::Optimal);
  CHECK(s.objective == 3);
}
