#include <algorithm>
#include <cmath>
#include <queue>

#include "conversion.hpp"
#include "metricfair/lp.hpp"

namespace metricfair::lp {

namespace {

struct Node {
  detail::Bounds bounds;
  std::optional<Rational> parent_bound;  // nullopt: +infinity (or the root)
  std::size_t id;
};

struct NodeOrder {
  // std::priority_queue pops the largest element: highest bound, then oldest.
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound.has_value() != b.parent_bound.has_value()) return a.parent_bound.has_value();
    if (a.parent_bound && *a.parent_bound != *b.parent_bound) return *a.parent_bound < *b.parent_bound;
    return a.id > b.id;
  }
};

void check_float_magnitudes(const MilpProblem& problem) {
  static const Rational limit = integer_power(2, 40);
  auto check = [](const Rational& v) {
    if (abs(v) > limit) {
      throw std::domain_error("float mode refuses coefficient " + metricfair::to_string(v) +
                              " (magnitude above 2^40)");
    }
  };
  const LinearProgram& lp = problem.base;
  for (const Rational& c : lp.objective()) check(c);
  for (const Constraint& row : lp.constraints()) {
    check(row.rhs);
    for (const Term& t : row.terms) check(t.coef);
  }
}

}  // namespace

Solution solve_milp(const MilpProblem& problem, const SolverOptions& options) {
  const LinearProgram& lp = problem.base;
  std::vector<std::size_t> binaries = problem.binary_vars;
  std::sort(binaries.begin(), binaries.end());
  binaries.erase(std::unique(binaries.begin(), binaries.end()), binaries.end());
  for (std::size_t b : binaries) {
    if (b >= lp.num_vars()) {
      throw DimensionError("binary variable " + std::to_string(b) + " out of range");
    }
  }
  const bool exact = options.mode == Mode::Rational;
  if (!exact) check_float_magnitudes(problem);

  // All comparisons happen in maximization space.
  const bool minimize = lp.sense() == Sense::Minimize;
  auto lift = [minimize](const Rational& v) { return minimize ? Rational(-v) : v; };

  detail::Bounds root = detail::bounds_of(lp);
  for (std::size_t b : binaries) {
    Rational lo = std::max(root.lower[b], Rational(0));
    Rational hi = root.upper[b] ? std::min(*root.upper[b], Rational(1)) : Rational(1);
    // Round inward to the integers.
    root.lower[b] = sgn(lo) > 0 ? 1 : 0;
    root.upper[b] = hi >= 1 ? 1 : (hi >= 0 ? 0 : -1);
  }

  std::optional<Rational> threshold;
  if (options.cutoff) threshold = lift(*options.cutoff);
  const Rational slack = exact ? Rational(0) : Rational(1, 1000000000);
  auto dominated = [&](const Rational& bound) { return threshold && bound <= *threshold + slack; };

  std::optional<Solution> incumbent;
  bool pruned = false;
  std::size_t nodes = 0, next_id = 0;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push({std::move(root), std::nullopt, next_id++});

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.parent_bound && dominated(*node.parent_bound)) {
      pruned = true;
      continue;
    }
    const detail::Conversion conv = detail::convert(lp, node.bounds);
    if (conv.bounds_conflict) continue;
    const detail::StandardResult result = detail::dispatch(conv.form, options.mode);
    ++nodes;
    if (result.status == Status::Infeasible) continue;

    if (result.status == Status::Unbounded) {
      auto free = std::find_if(binaries.begin(), binaries.end(), [&](std::size_t b) {
        return node.bounds.lower[b] != *node.bounds.upper[b];
      });
      if (free == binaries.end()) {
        Solution sol;
        sol.status = Status::Unbounded;
        sol.node_count = nodes;
        return sol;
      }
      Node zero{node.bounds, std::nullopt, next_id++};
      zero.bounds.upper[*free] = Rational(0);
      Node one{std::move(node.bounds), std::nullopt, next_id++};
      one.bounds.lower[*free] = Rational(1);
      open.push(std::move(zero));
      open.push(std::move(one));
      continue;
    }

    Solution sol = detail::recover(lp, conv, result);
    const Rational value = lift(sol.objective);
    if (dominated(value)) {
      pruned = true;
      continue;
    }

    // Most fractional binary, lowest index on ties.
    std::optional<std::size_t> branch;
    Rational closest = 1;
    for (std::size_t b : binaries) {
      const Rational& v = sol.values[b];
      const bool integral = exact ? (sgn(v) == 0 || v == 1)
                                  : (std::abs(v.get_d()) <= 1e-9 || std::abs(v.get_d() - 1) <= 1e-9);
      if (integral) continue;
      const Rational distance = abs(v - Rational(1, 2));
      if (!branch || distance < closest) {
        branch = b;
        closest = distance;
      }
    }
    if (!branch) {
      threshold = value;
      incumbent = std::move(sol);
      continue;
    }
    Node zero{node.bounds, value, next_id++};
    zero.bounds.upper[*branch] = Rational(0);
    Node one{std::move(node.bounds), value, next_id++};
    one.bounds.lower[*branch] = Rational(1);
    open.push(std::move(zero));
    open.push(std::move(one));
  }

  if (!incumbent) {
    Solution sol;
    sol.status = pruned ? Status::Dominated : Status::Infeasible;
    if (pruned) sol.objective = *options.cutoff;
    sol.node_count = nodes;
    return sol;
  }
  if (exact && sgn(lp.max_violation(incumbent->values)) != 0) {
    throw std::logic_error("branch and bound produced an infeasible incumbent");
  }
  incumbent->node_count = nodes;
  return *incumbent;
}

}  // namespace metricfair::lp
