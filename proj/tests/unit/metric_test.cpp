#include <doctest.h>

#include <algorithm>

#include "metricfair/generators.hpp"
#include "metricfair/metric.hpp"
#include "support/fixtures.hpp"

using namespace metricfair;
using testing::matrix;
using testing::set_of;

namespace {

const CostMatrix& line3() {
  static const CostMatrix d = line_family(3).costs;
  return d;
}

// phi_k by brute force: max over all k-subsets of agents.
Rational phi_k_brute(const AlternativeSet& S, std::size_t k, const CostMatrix& d) {
  const std::size_t n = d.num_agents();
  Rational best = -1;
  for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    Rational total = 0;
    for (Agent v = 0; v < n; ++v) {
      if (mask >> v & 1) total += d.set_cost(v, S);
    }
    best = std::max(best, total);
  }
  return best;
}

}  // namespace

TEST_CASE("AlternativeSet") {
  const AlternativeSet s({2, 0});
  CHECK(s.str() == "{0,2}");
  CHECK(s.contains(2));
  CHECK_THROWS_AS(AlternativeSet({}), std::invalid_argument);
  CHECK_THROWS_AS(AlternativeSet({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(s.check_within(2), std::out_of_range);
  CHECK(all_subsets(4, 2).size() == 6);
  CHECK(all_subsets(4, 2).front() == set_of({0, 1}));
  CHECK(all_subsets(4, 2).back() == set_of({2, 3}));
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(200, 100) == UINT64_MAX);
}

TEST_CASE("quadrilateral check") {
  CHECK(is_qmetric(line3()).ok);
  const CheckReport bad = is_qmetric(matrix({{10, 1}, {1, 1}}));
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.violation->kind == MetricViolation::Kind::Quadrilateral);
  CHECK(bad.violation->v == 0);
  CHECK(bad.violation->v2 == 1);
  CHECK(bad.violation->c == 0);
  CHECK(bad.violation->c2 == 1);
  CHECK(is_qmetric(matrix({{10, 1}, {1, 1}}), Rational(7)).ok);
  CHECK(is_qmetric(matrix({{-1, 1}})).violation->kind == MetricViolation::Kind::NegativeCost);
}

TEST_CASE("consistency with a profile") {
  const Profile line = line_family(3).profile;
  CHECK(is_consistent(line3(), line).ok);
  CHECK(is_consistent(CostMatrix(3, 2, Rational(1)), line).ok);
  CostMatrix flipped = line3();
  flipped.at(0, 0) = 1;
  flipped.at(0, 1) = 2;
  const CheckReport r = is_consistent(flipped, line);
  REQUIRE_FALSE(r.ok);
  CHECK(r.violation->v == 0);
  CHECK_THROWS_AS(is_consistent(CostMatrix(2, 2), line), std::invalid_argument);
}

TEST_CASE("the floor metric is a consistent q-metric") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Profile p = random_profile(1 + rng.below(5), 2 + rng.below(4), rng);
    const Alternative c = p.ranking(0).at(1 + rng.below(p.num_alternatives() - 1));
    const CostMatrix d = floor_metric(p, c, 0, p.ranking(0).top());
    CHECK(is_consistent_metric(d, p));
  }
}

TEST_CASE("social costs on the line metric") {
  CHECK(phi(set_of({0}), line3()) == 5);
  CHECK(phi(set_of({1}), line3()) == 3);
  CHECK(phi(set_of({0, 1}), line3()) == 8);
  CHECK(phi(set_of({0, 1}), CostMatrix(3, 2, Rational(1))) == 6);
  CHECK(phi_k(set_of({0}), 1, line3()) == 3);
  CHECK(phi_k(set_of({0}), 2, line3()) == 4);
  CHECK(phi_k(set_of({0}), 3, line3()) == 5);
  CHECK(phi_k(set_of({1}), 1, line3()) == 1);
  CHECK_THROWS_AS(phi_k(set_of({0}), 0, line3()), std::out_of_range);
  CHECK_THROWS_AS(phi_k(set_of({0}), 4, line3()), std::out_of_range);
}

TEST_CASE("phi_k matches the brute-force maximum over agent subsets") {
  Rng rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.below(6), m = 1 + rng.below(4);
    CostMatrix d(n, m);
    for (Agent v = 0; v < n; ++v) {
      for (Alternative c = 0; c < m; ++c) d.at(v, c) = testing::q(long(rng.below(20)), 1 + long(rng.below(4)));
    }
    const AlternativeSet S = all_subsets(m, 1 + rng.below(m)).front();
    for (std::size_t k = 1; k <= n; ++k) CHECK(phi_k(S, k, d) == phi_k_brute(S, k, d));
    CHECK(phi_k(S, n, d) == phi(S, d));
  }
}

TEST_CASE("fixed-metric ratios") {
  const DistortionRatio dist = ratio_distortion(set_of({0}), line3());
  CHECK(dist.value == Ratio(Rational(5, 3)));
  CHECK(dist.optimum == set_of({1}));
  CHECK(ratio_distortion(set_of({1}), line3()).value == Ratio(Rational(1)));
  CHECK(ratio_distortion(set_of({0, 1}), line3()).value == Ratio(Rational(1)));

  const FairnessRatio fair = ratio_fairness(set_of({0}), line3());
  CHECK(fair.value == Ratio(Rational(3)));
  CHECK(fair.k_star == 1);
  CHECK(fair.adversary == set_of({1}));
  for (Alternative c = 0; c < 2; ++c) {
    CHECK(ratio_fairness(set_of({c}), CostMatrix(3, 2, Rational(1))).value == Ratio(Rational(1)));
  }
}

TEST_CASE("zero-cost ratios") {
  const FairnessRatio z = ratio_fairness(set_of({0}), CostMatrix(2, 2));
  CHECK(z.value == Ratio(Rational(1)));
  CHECK(z.degenerate);
  CHECK(ratio_distortion(set_of({0}), matrix({{1, 0}})).value.is_infinite());
}

TEST_CASE("fixed-metric property: distortion <= fairness <= distortion + 2(N-1)/N") {
  Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = euclidean_instance({.dimension = 1 + rng.below(2),
                                              .low = -1,
                                              .high = 1,
                                              .seed = rng.next(),
                                              .agents = 1 + rng.below(5),
                                              .alternatives = 2 + rng.below(3)});
    const Rational n(static_cast<unsigned long>(inst.costs.num_agents()));
    for (Alternative c = 0; c < inst.costs.num_alternatives(); ++c) {
      const Ratio d = ratio_distortion(set_of({c}), inst.costs).value;
      const Ratio f = ratio_fairness(set_of({c}), inst.costs).value;
      CHECK(d <= f);
      CHECK(f.value() <= d.value() + 2 * (n - 1) / n);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("cost matrix text format") {
  const CostMatrix d = parse_cost_matrix("# c\n2 2\n1/2 0.25\n3 0\n");
  CHECK(d.at(0, 0) == Rational(1, 2));
  CHECK(d.at(0, 1) == Rational(1, 4));
  CHECK(parse_cost_matrix(serialize_cost_matrix(line3())) == line3());
  CHECK_THROWS_AS(parse_cost_matrix("2 2\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_cost_matrix("1 2\n1 -1\n"), ParseError);
  CHECK_THROWS_AS(parse_cost_matrix("1 2\n1 x\n"), ParseError);
}
