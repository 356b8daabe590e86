#include <doctest.h>

#include <cmath>

#include "metricfair/lp.hpp"
#include "support/fixtures.hpp"
#include "support/random_programs.hpp"
#include "support/vertex_enumeration.hpp"

using namespace metricfair;
using namespace metricfair::lp;
using testing::q;

namespace {

LinearProgram one_var(std::optional<Rational> upper, const Rational& lower = 0) {
  LinearProgram lp(1);
  lp.set_objective({q(1)});
  if (upper) lp.add_constraint({q(1)}, Relation::LessEqual, *upper);
  lp.add_constraint({q(1)}, Relation::GreaterEqual, lower);
  return lp;
}

// min b.y s.t. A^T y >= c, y >= 0, for max c.x s.t. A x <= b, x >= 0.
LinearProgram explicit_dual(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                            const std::vector<Rational>& c) {
  LinearProgram dual(A.size());
  dual.set_objective(b, Sense::Minimize);
  for (std::size_t j = 0; j < c.size(); ++j) {
    std::vector<Rational> column(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) column[i] = A[i][j];
    dual.add_constraint(column, Relation::GreaterEqual, c[j]);
  }
  return dual;
}

}  // namespace

TEST_CASE("trivial programs") {
  const Solution one = solve_lp(one_var(q(1)));
  CHECK(one.status == Status::Optimal);
  CHECK(one.objective == 1);
  CHECK(one.values == std::vector<Rational>{q(1)});
  CHECK(solve_lp(one_var(std::nullopt)).status == Status::Unbounded);
  CHECK(solve_lp(one_var(q(1), q(2))).status == Status::Infeasible);
  for (Mode mode : {Mode::Rational, Mode::Float}) {
    CHECK(solve_lp(one_var(q(1)), {mode}).objective == 1);
    CHECK(solve_lp(one_var(std::nullopt), {mode}).status == Status::Unbounded);
    CHECK(solve_lp(one_var(q(1), q(2)), {mode}).status == Status::Infeasible);
  }
}

TEST_CASE("bounds, equalities and minimization") {
  LinearProgram lp(3);
  lp.set_objective({q(1), q(2), q(-1)}, Sense::Minimize);
  lp.set_lower_bound(0, q(-2));
  lp.set_upper_bound(0, q(3));
  lp.set_lower_bound(1, q(1));
  lp.set_upper_bound(1, q(1));  // fixed
  lp.set_upper_bound(2, q(5, 2));
  lp.add_constraint({q(1), q(1), q(1)}, Relation::Equal, q(2));
  const Solution s = solve_lp(lp);
  REQUIRE(s.status == Status::Optimal);
  // x1 = 1; x0 + x2 = 1 with x2 <= 5/2: x0 = -3/2, x2 = 5/2 gives -3/2 + 2 - 5/2
  CHECK(s.objective == -2);
  CHECK(lp.max_violation(s.values) == 0);

  LinearProgram clash(1);
  clash.set_lower_bound(0, q(2));
  clash.set_upper_bound(0, q(2));
  clash.add_constraint({q(1)}, Relation::LessEqual, q(1));
  CHECK(solve_lp(clash).status == Status::Infeasible);
}

TEST_CASE("malformed input") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.set_objective({q(1)}), DimensionError);
  CHECK_THROWS_AS(lp.add_constraint({q(1)}, Relation::LessEqual, q(0)), DimensionError);
  CHECK_THROWS_AS(lp.add_sparse_constraint({{5, q(1)}}, Relation::LessEqual, q(0)), DimensionError);
  CHECK_THROWS_AS(lp.set_lower_bound(2, q(0)), DimensionError);
}

TEST_CASE("a cycling-prone degenerate program terminates") {
  // Classic example on which the textbook largest-coefficient rule cycles.
  LinearProgram lp(4);
  lp.set_objective({q(3, 4), q(-20), q(1, 2), q(-6)});
  lp.add_constraint({q(1, 4), q(-8), q(-1), q(9)}, Relation::LessEqual, q(0));
  lp.add_constraint({q(1, 2), q(-12), q(-1, 2), q(3)}, Relation::LessEqual, q(0));
  lp.add_constraint({q(0), q(0), q(1), q(0)}, Relation::LessEqual, q(1));
  const Solution exact = solve_lp(lp);
  REQUIRE(exact.status == Status::Optimal);
  CHECK(exact.objective == q(5, 4));
  const Solution fast = solve_lp(lp, {Mode::Float});
  REQUIRE(fast.status == Status::Optimal);
  CHECK(to_double(fast.objective) == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("random boxed programs match vertex enumeration") {
  Rng rng(2024);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LinearProgram lp = testing::random_boxed_lp(rng, 1 + rng.below(4), 1 + rng.below(5));
    const std::optional<Rational> expected = testing::vertex_optimum(lp);
    const Solution exact = solve_lp(lp);
    const Solution fast = solve_lp(lp, {Mode::Float});
    CAPTURE(trial);
    if (!expected) {
      ++infeasible;
      CHECK(exact.status == Status::Infeasible);
      CHECK(fast.status == Status::Infeasible);
      continue;
    }
    ++optimal;
    REQUIRE(exact.status == Status::Optimal);
    CHECK(exact.objective == *expected);
    CHECK(lp.max_violation(exact.values) == 0);
    REQUIRE(fast.status == Status::Optimal);
    CHECK(std::abs(to_double(fast.objective - *expected)) < 1e-6);
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 10);
}

TEST_CASE("strong duality against the explicit dual program") {
  Rng rng(99);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(5);
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(cols));
    std::vector<Rational> b(rows), c(cols);
    for (auto& row : A) {
      for (Rational& a : row) a = testing::small_int(rng, -3, 6);
    }
    for (Rational& x : b) x = testing::small_int(rng, 0, 10);
    for (Rational& x : c) x = testing::small_int(rng, -2, 5);
    LinearProgram primal(cols);
    primal.set_objective(c);
    for (std::size_t i = 0; i < rows; ++i) primal.add_constraint(A[i], Relation::LessEqual, b[i]);
    const Solution p = solve_lp(primal);
    const Solution d = solve_lp(explicit_dual(A, b, c));
    // b >= 0 keeps the primal feasible, so it is either optimal or unbounded.
    REQUIRE(p.status != Status::Infeasible);
    if (p.status == Status::Unbounded) {
      CHECK(d.status == Status::Infeasible);
      continue;
    }
    REQUIRE(d.status == Status::Optimal);
    CHECK(p.objective == d.objective);
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("the three standard-form solvers agree") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    detail::StandardForm form;
    form.num_cols = 1 + rng.below(5);
    const std::size_t rows = 1 + rng.below(5);
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<std::pair<std::size_t, Rational>> row;
      for (std::size_t j = 0; j < form.num_cols; ++j) {
        if (rng.below(3)) row.emplace_back(j, testing::small_int(rng, -4, 6));
      }
      form.rows.push_back(row);
      form.rhs.push_back(testing::small_int(rng, -3, 9));
    }
    for (std::size_t j = 0; j < form.num_cols; ++j) form.cost.push_back(testing::small_int(rng, -3, 5));
    const auto bland = detail::solve_exact_bland(form);
    const auto guided = detail::solve_guided(form);
    const auto fast = detail::solve_float(form);
    CAPTURE(trial);
    CHECK(bland.status == guided.status);
    CHECK(bland.status == fast.status);
    if (bland.status == Status::Optimal) {
      CHECK(bland.objective == guided.objective);
      CHECK(std::abs(to_double(bland.objective - fast.objective)) < 1e-6);
    }
  }
}

TEST_CASE("best_rational") {
  CHECK(detail::best_rational(1.0 / 3.0, 1 << 20) == q(1, 3));
  CHECK(detail::best_rational(3.14159265358979, 1000) == q(355, 113));
  CHECK(detail::best_rational(-2.5, 10) == q(-5, 2));
  CHECK(detail::best_rational(0.0, 10) == 0);
}

TEST_CASE("LP text output") {
  LinearProgram lp(2);
  lp.set_objective({q(1), q(-1, 2)});
  lp.set_name(0, "x");
  lp.add_constraint({q(1), q(1)}, Relation::LessEqual, q(4), "cap");
  lp.add_constraint({q(1), q(0)}, Relation::GreaterEqual, q(1));
  lp.set_upper_bound(1, q(1));
  const std::string text = write_lp_format(lp, {1});
  CHECK(text.find("Maximize") == 0);
  CHECK(text.find("cap: x + x1 <= 4") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("- 0.5 x1") != std::string::npos);
  CHECK(text.rfind("End") == text.size() - 4);
}
