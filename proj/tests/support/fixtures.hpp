#pragma once

#include "metricfair/generators.hpp"
#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"

namespace metricfair::testing {

inline Profile profile_of(std::size_t m, const std::vector<std::vector<Alternative>>& orders,
                          std::vector<std::string> names = {}) {
  std::vector<Ranking> rankings;
  for (const auto& o : orders) rankings.emplace_back(o);
  return Profile(m, std::move(rankings), std::move(names));
}

// a>b>c, b>c>a, c>a>b
inline Profile condorcet_cycle() {
  return profile_of(3, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {"a", "b", "c"});
}

inline Profile unanimous(std::size_t agents, std::size_t m) {
  std::vector<Alternative> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  return profile_of(m, std::vector<std::vector<Alternative>>(agents, order));
}

// Every agent ranks c2 above c1.
inline Profile all_prefer_second(std::size_t agents) {
  return profile_of(2, std::vector<std::vector<Alternative>>(agents, {1, 0}), {"c1", "c2"});
}

// mpq_class(n, d) does not canonicalize; GMP arithmetic assumes it.
inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline AlternativeSet set_of(std::vector<Alternative> xs) { return AlternativeSet(std::move(xs)); }

inline CostMatrix matrix(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return CostMatrix::from_rows(r);
}

}  // namespace metricfair::testing
