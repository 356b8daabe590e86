#pragma once

// Exhaustive MILP oracle: tries all 2^b binary assignments and solves each
// residual LP, either by vertex enumeration (boxed continuous variables) or
// with solve_lp. Only practical for b <= ~12.

#include <algorithm>
#include <optional>
#include <vector>

#include "metricfair/lp.hpp"
#include "support/vertex_enumeration.hpp"

namespace metricfair::testing {

enum class Residual { Vertices, SolveLp };

struct EnumerationResult {
  bool unbounded = false;
  std::optional<Rational> best;  // nullopt: infeasible
};

// The LP left after fixing the binaries, over the remaining variables only.
inline lp::LinearProgram residual_lp(const lp::MilpProblem& problem, std::uint64_t bits,
                                     std::vector<std::size_t>& kept, Rational& offset) {
  const lp::LinearProgram& base = problem.base;
  const auto& bins = problem.binary_vars;
  std::vector<std::optional<int>> fixed(base.num_vars());
  for (std::size_t i = 0; i < bins.size(); ++i) fixed[bins[i]] = int((bits >> i) & 1);
  kept.clear();
  std::vector<std::size_t> column(base.num_vars(), SIZE_MAX);
  for (std::size_t j = 0; j < base.num_vars(); ++j) {
    if (!fixed[j]) {
      column[j] = kept.size();
      kept.push_back(j);
    }
  }
  lp::LinearProgram out(kept.size());
  std::vector<Rational> c(kept.size());
  offset = 0;
  for (std::size_t j = 0; j < base.num_vars(); ++j) {
    if (fixed[j]) offset += base.objective()[j] * *fixed[j];
    else c[column[j]] = base.objective()[j];
  }
  out.set_objective(c, base.sense());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.set_lower_bound(k, base.lower_bound(kept[k]));
    out.set_upper_bound(k, base.upper_bound(kept[k]));
  }
  for (const lp::Constraint& row : base.constraints()) {
    std::vector<lp::Term> terms;
    Rational rhs = row.rhs;
    for (const lp::Term& t : row.terms) {
      if (fixed[t.var]) rhs -= t.coef * *fixed[t.var];
      else terms.push_back({column[t.var], t.coef});
    }
    out.add_sparse_constraint(terms, row.relation, rhs);
  }
  return out;
}

inline EnumerationResult enumerate_milp(const lp::MilpProblem& problem, Residual how) {
  EnumerationResult result;
  const bool maximize = problem.base.sense() == lp::Sense::Maximize;
  const std::uint64_t count = std::uint64_t(1) << problem.binary_vars.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    // Bounds on the binaries themselves (e.g. fixed to 0) must be respected.
    bool allowed = true;
    for (std::size_t i = 0; i < problem.binary_vars.size(); ++i) {
      const std::size_t var = problem.binary_vars[i];
      const Rational value((bits >> i) & 1);
      const auto& hi = problem.base.upper_bound(var);
      if (value < problem.base.lower_bound(var) || (hi && value > *hi)) allowed = false;
    }
    if (!allowed) continue;
    std::vector<std::size_t> kept;
    Rational offset;
    const lp::LinearProgram lp = residual_lp(problem, bits, kept, offset);
    std::optional<Rational> value;
    if (how == Residual::Vertices) {
      value = vertex_optimum(lp);
    } else {
      const lp::Solution s = lp::solve_lp(lp);
      if (s.status == lp::Status::Unbounded) {
        result.unbounded = true;
        continue;
      }
      if (s.status == lp::Status::Optimal) value = s.objective;
    }
    if (!value) continue;
    const Rational total = *value + offset;
    if (!result.best || (maximize ? total > *result.best : total < *result.best)) result.best = total;
  }
  return result;
}

}  // namespace metricfair::testing
