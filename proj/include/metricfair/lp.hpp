#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metricfair/rational.hpp"

namespace metricfair::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Maximize, Minimize };

/// Rational: every answer is exact and certified. Float: double-precision
/// simplex, residuals re-checked at 1e-9.
enum class Mode { Rational, Float };

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Term {
  std::size_t var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;  // sparse, one entry per variable at most
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string name;
};

/// max (or min) c.x subject to linear rows and per-variable bounds.
/// Lower bounds default to 0; upper bounds default to none.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const noexcept { return num_vars_; }

  /// Throws DimensionError unless objective.size() == num_vars.
  void set_objective(std::vector<Rational> objective, Sense sense = Sense::Maximize);
  void set_objective_coef(std::size_t var, const Rational& coef);

  /// Dense form; throws DimensionError on a length mismatch.
  void add_constraint(const std::vector<Rational>& coefficients, Relation relation,
                      const Rational& rhs, std::string name = {});
  /// Sparse form; zero coefficients are dropped, repeated variables summed.
  void add_sparse_constraint(std::vector<Term> terms, Relation relation, const Rational& rhs,
                             std::string name = {});

  void set_lower_bound(std::size_t var, const Rational& bound);
  void set_upper_bound(std::size_t var, std::optional<Rational> bound);
  void set_name(std::size_t var, std::string name);

  Sense sense() const noexcept { return sense_; }
  const std::vector<Rational>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const Rational& lower_bound(std::size_t var) const { return lower_.at(var); }
  const std::optional<Rational>& upper_bound(std::size_t var) const { return upper_.at(var); }
  std::string var_name(std::size_t var) const;

  /// Value of the objective at x (no feasibility check).
  Rational evaluate(const std::vector<Rational>& x) const;
  /// Largest violation of any row or bound at x; 0 when x is feasible.
  Rational max_violation(const std::vector<Rational>& x) const;

 private:
  void check_var(std::size_t var) const;

  std::size_t num_vars_;
  Sense sense_ = Sense::Maximize;
  std::vector<Rational> objective_;
  std::vector<Constraint> constraints_;
  std::vector<Rational> lower_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<std::string> names_;
};

struct MilpProblem {
  LinearProgram base;
  std::vector<std::size_t> binary_vars;
};

enum class Status {
  Optimal,
  Infeasible,
  Unbounded,
  Dominated  ///< a cutoff was given and no solution beats it
};

const char* to_string(Status status);

struct Solution {
  Status status = Status::Infeasible;
  Rational objective;
  std::vector<Rational> values;
  std::size_t node_count = 0;  ///< relaxations solved (1 for a plain LP)
};

struct SolverOptions {
  Mode mode = Mode::Rational;
  /// MILP only: prune every node whose bound does not exceed this value
  /// (minimization: is not below it). Makes Status::Dominated possible.
  std::optional<Rational> cutoff;
};

/// Throws DimensionError on malformed input.
Solution solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/// Best-first branch and bound over the binaries. Throws DimensionError on
/// malformed input, and std::domain_error in float mode when a coefficient
/// exceeds 2^40 in magnitude.
Solution solve_milp(const MilpProblem& problem, const SolverOptions& options = {});

/// CPLEX LP text, readable by most external solvers.
std::string write_lp_format(const LinearProgram& lp,
                            const std::vector<std::size_t>& binary_vars = {});

namespace detail {

/// max c.x s.t. A x <= b, x >= 0, with A stored by rows.
struct StandardForm {
  std::size_t num_cols = 0;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> cost;
};

struct StandardResult {
  Status status = Status::Infeasible;
  Rational objective;
  std::vector<Rational> x;
};

/// Exact dictionary simplex with Bland's rule. Slow but always terminates.
StandardResult solve_exact_bland(const StandardForm& form);

/// Double simplex followed by an exact optimality certificate; falls back to
/// solve_exact_bland whenever the certificate cannot be built.
StandardResult solve_guided(const StandardForm& form);

/// Double simplex only, residual-checked at 1e-9; falls back to solve_guided.
StandardResult solve_float(const StandardForm& form);

/// Closest fraction with denominator <= max_den.
Rational best_rational(double value, long max_den);

}  // namespace detail

}  // namespace metricfair::lp
