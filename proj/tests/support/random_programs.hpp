#pragma once

#include "metricfair/generators.hpp"
#include "metricfair/lp.hpp"

namespace metricfair::testing {

inline Rational small_int(Rng& rng, long lo, long hi) {
  return Rational(lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
}

// Every variable boxed in [lower, upper] so vertex enumeration applies.
inline lp::LinearProgram random_boxed_lp(Rng& rng, std::size_t vars, std::size_t rows) {
  lp::LinearProgram lp(vars);
  std::vector<Rational> c(vars);
  for (Rational& x : c) x = small_int(rng, -4, 6);
  lp.set_objective(c, rng.below(3) == 0 ? lp::Sense::Minimize : lp::Sense::Maximize);
  for (std::size_t j = 0; j < vars; ++j) {
    const Rational lo = small_int(rng, -2, 1);
    lp.set_lower_bound(j, lo);
    lp.set_upper_bound(j, lo + small_int(rng, 0, 6));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Rational> a(vars);
    for (Rational& x : a) x = rng.below(4) == 0 ? Rational(0) : small_int(rng, -5, 5);
    const std::uint64_t kind = rng.below(6);
    const lp::Relation rel = kind == 0   ? lp::Relation::Equal
                             : kind <= 2 ? lp::Relation::GreaterEqual
                                         : lp::Relation::LessEqual;
    Rational rhs = small_int(rng, -6, 12);
    if (rng.below(3) == 0) rhs /= 2 + rng.below(3);
    lp.add_constraint(a, rel, rhs);
  }
  return lp;
}

// Up to `binaries` binaries plus a few boxed continuous variables.
inline lp::MilpProblem random_milp(Rng& rng, std::size_t binaries, std::size_t continuous,
                                   std::size_t rows) {
  lp::MilpProblem problem{random_boxed_lp(rng, binaries + continuous, rows), {}};
  for (std::size_t j = 0; j < binaries; ++j) {
    problem.base.set_lower_bound(j, 0);
    problem.base.set_upper_bound(j, Rational(1));
    problem.binary_vars.push_back(j);
  }
  return problem;
}

}  // namespace metricfair::testing
