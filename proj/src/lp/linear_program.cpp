#include <algorithm>
#include <map>

#include "conversion.hpp"
#include "metricfair/lp.hpp"

namespace metricfair::lp {

LinearProgram::LinearProgram(std::size_t num_vars)
    : num_vars_(num_vars),
      objective_(num_vars, Rational(0)),
      lower_(num_vars, Rational(0)),
      upper_(num_vars),
      names_(num_vars) {}

void LinearProgram::check_var(std::size_t var) const {
  if (var >= num_vars_) {
    throw DimensionError("variable " + std::to_string(var) + " out of range (" +
                         std::to_string(num_vars_) + " variables)");
  }
}

void LinearProgram::set_objective(std::vector<Rational> objective, Sense sense) {
  if (objective.size() != num_vars_) {
    throw DimensionError("objective has " + std::to_string(objective.size()) +
                         " coefficients for " + std::to_string(num_vars_) + " variables");
  }
  objective_ = std::move(objective);
  sense_ = sense;
}

void LinearProgram::set_objective_coef(std::size_t var, const Rational& coef) {
  check_var(var);
  objective_[var] = coef;
}

void LinearProgram::add_constraint(const std::vector<Rational>& coefficients, Relation relation,
                                   const Rational& rhs, std::string name) {
  if (coefficients.size() != num_vars_) {
    throw DimensionError("constraint has " + std::to_string(coefficients.size()) +
                         " coefficients for " + std::to_string(num_vars_) + " variables");
  }
  std::vector<Term> terms;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    if (sgn(coefficients[j]) != 0) terms.push_back({j, coefficients[j]});
  }
  add_sparse_constraint(std::move(terms), relation, rhs, std::move(name));
}

void LinearProgram::add_sparse_constraint(std::vector<Term> terms, Relation relation,
                                          const Rational& rhs, std::string name) {
  std::map<std::size_t, Rational> merged;
  for (Term& t : terms) {
    check_var(t.var);
    merged[t.var] += t.coef;
  }
  Constraint row;
  for (auto& [var, coef] : merged) {
    if (sgn(coef) != 0) row.terms.push_back({var, std::move(coef)});
  }
  row.relation = relation;
  row.rhs = rhs;
  row.name = std::move(name);
  constraints_.push_back(std::move(row));
}

void LinearProgram::set_lower_bound(std::size_t var, const Rational& bound) {
  check_var(var);
  lower_[var] = bound;
}

void LinearProgram::set_upper_bound(std::size_t var, std::optional<Rational> bound) {
  check_var(var);
  upper_[var] = std::move(bound);
}

void LinearProgram::set_name(std::size_t var, std::string name) {
  check_var(var);
  names_[var] = std::move(name);
}

std::string LinearProgram::var_name(std::size_t var) const {
  check_var(var);
  return names_[var].empty() ? "x" + std::to_string(var) : names_[var];
}

Rational LinearProgram::evaluate(const std::vector<Rational>& x) const {
  if (x.size() != num_vars_) throw DimensionError("assignment has the wrong length");
  Rational total = 0;
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (sgn(objective_[j]) != 0) total += objective_[j] * x[j];
  }
  return total;
}

Rational LinearProgram::max_violation(const std::vector<Rational>& x) const {
  if (x.size() != num_vars_) throw DimensionError("assignment has the wrong length");
  Rational worst = 0, lhs, gap;
  for (const Constraint& row : constraints_) {
    lhs = 0;
    for (const Term& t : row.terms) lhs += t.coef * x[t.var];
    switch (row.relation) {
      case Relation::LessEqual: gap = lhs - row.rhs; break;
      case Relation::GreaterEqual: gap = row.rhs - lhs; break;
      case Relation::Equal: gap = abs(lhs - row.rhs); break;
    }
    if (gap > worst) worst = gap;
  }
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (lower_[j] - x[j] > worst) worst = lower_[j] - x[j];
    if (upper_[j] && x[j] - *upper_[j] > worst) worst = x[j] - *upper_[j];
  }
  return worst;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::Dominated: return "Dominated";
  }
  return "?";
}

namespace detail {

Bounds bounds_of(const LinearProgram& lp) {
  Bounds b;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    b.lower.push_back(lp.lower_bound(j));
    b.upper.push_back(lp.upper_bound(j));
  }
  return b;
}

Conversion convert(const LinearProgram& lp, const Bounds& bounds) {
  Conversion out;
  const std::size_t n = lp.num_vars();
  out.minimize = lp.sense() == Sense::Minimize;
  out.column_of.resize(n);
  out.shift = bounds.lower;
  StandardForm& form = out.form;

  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& up = bounds.upper[j];
    if (up && *up < bounds.lower[j]) out.bounds_conflict = true;
    if (up && *up == bounds.lower[j]) continue;
    out.column_of[j] = cols++;
  }
  form.num_cols = cols;
  form.cost.assign(cols, Rational(0));
  out.offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& c = lp.objective()[j];
    if (sgn(c) == 0) continue;
    out.offset += c * out.shift[j];
    if (out.column_of[j]) form.cost[*out.column_of[j]] = out.minimize ? Rational(-c) : c;
  }

  auto push = [&form](std::vector<std::pair<std::size_t, Rational>> row, Rational rhs) {
    form.rows.push_back(std::move(row));
    form.rhs.push_back(std::move(rhs));
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (out.column_of[j] && bounds.upper[j]) {
      push({{*out.column_of[j], Rational(1)}}, *bounds.upper[j] - bounds.lower[j]);
    }
  }
  for (const Constraint& row : lp.constraints()) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Rational rhs = row.rhs;
    for (const Term& t : row.terms) {
      if (sgn(out.shift[t.var]) != 0) rhs -= t.coef * out.shift[t.var];
      if (out.column_of[t.var]) terms.emplace_back(*out.column_of[t.var], t.coef);
    }
    if (terms.empty()) {
      // Every variable is fixed: the row is a constant test.
      const bool ok = row.relation == Relation::LessEqual      ? sgn(rhs) >= 0
                      : row.relation == Relation::GreaterEqual ? sgn(rhs) <= 0
                                                               : sgn(rhs) == 0;
      if (!ok) out.bounds_conflict = true;
      continue;
    }
    if (row.relation != Relation::GreaterEqual) push(terms, rhs);
    if (row.relation != Relation::LessEqual) {
      for (auto& term : terms) term.second = -term.second;
      push(std::move(terms), -rhs);
    }
  }
  return out;
}

Solution recover(const LinearProgram& lp, const Conversion& conv, const StandardResult& result) {
  Solution sol;
  sol.status = result.status;
  sol.node_count = 1;
  if (result.status != Status::Optimal) return sol;
  sol.values = conv.shift;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (conv.column_of[j]) sol.values[j] += result.x[*conv.column_of[j]];
  }
  sol.objective = lp.evaluate(sol.values);
  return sol;
}

StandardResult dispatch(const StandardForm& form, Mode mode) {
  return mode == Mode::Rational ? solve_guided(form) : solve_float(form);
}

}  // namespace detail

Solution solve_lp(const LinearProgram& lp, const SolverOptions& options) {
  const detail::Conversion conv = detail::convert(lp, detail::bounds_of(lp));
  if (conv.bounds_conflict) return Solution{Status::Infeasible, 0, {}, 1};
  Solution sol = detail::recover(lp, conv, detail::dispatch(conv.form, options.mode));
  if (sol.status == Status::Optimal && options.mode == Mode::Rational &&
      sgn(lp.max_violation(sol.values)) != 0) {
    throw std::logic_error("LP solver returned an infeasible point");
  }
  return sol;
}

}  // namespace metricfair::lp
