// Dictionary simplex shared by the double and exact paths.
//
// Tableau layout: rows 0..R-1 hold the constraints, row R the objective
// (stored as -c), row R+1 the phase-one objective. Column C is the single
// artificial variable and column C+1 the right-hand side. Variable ids are
// 0..C-1 for structurals, C..C+R-1 for slacks and -1 for the artificial.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "metricfair/lp.hpp"

namespace metricfair::lp::detail {

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double eps = 1e-9;
  static bool pos(double v) { return v > eps; }
  static bool neg(double v) { return v < -eps; }
  static bool zero(double v) { return std::abs(v) <= eps; }
  static double from(const Rational& q) { return q.get_d(); }
};

template <>
struct Arith<Rational> {
  static bool pos(const Rational& v) { return sgn(v) > 0; }
  static bool neg(const Rational& v) { return sgn(v) < 0; }
  static bool zero(const Rational& v) { return sgn(v) == 0; }
  static const Rational& from(const Rational& q) { return q; }
};

class IterationLimit : public std::runtime_error {
 public:
  IterationLimit() : std::runtime_error("simplex iteration limit") {}
};

template <class T>
class Dictionary {
  using A = Arith<T>;

 public:
  Dictionary(const StandardForm& form, bool bland)
      : rows_(form.rows.size()),
        cols_(form.num_cols),
        bland_(bland),
        D_(rows_ + 2, std::vector<T>(cols_ + 2, T(0))),
        B_(rows_),
        N_(cols_ + 1) {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (const auto& [j, a] : form.rows[i]) D_[i][j] = A::from(a);
      D_[i][cols_] = -1;
      D_[i][cols_ + 1] = A::from(form.rhs[i]);
      B_[i] = static_cast<long>(cols_ + i);
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      N_[j] = static_cast<long>(j);
      D_[rows_][j] = -A::from(form.cost[j]);
    }
    N_[cols_] = -1;
    D_[rows_ + 1][cols_] = 1;
  }

  Status solve() {
    if (rows_ > 0) {
      std::size_t r = 0;
      for (std::size_t i = 1; i < rows_; ++i) {
        if (D_[i][cols_ + 1] < D_[r][cols_ + 1]) r = i;
      }
      if (A::neg(D_[r][cols_ + 1])) {
        pivot(r, cols_);
        if (!run(2) || A::neg(D_[rows_ + 1][cols_ + 1])) return Status::Infeasible;
        for (std::size_t i = 0; i < rows_; ++i) {
          if (B_[i] != -1) continue;
          // Drive the artificial out on the largest available entry.
          std::size_t s = cols_ + 1;
          for (std::size_t j = 0; j <= cols_; ++j) {
            if (N_[j] == -1 || A::zero(D_[i][j])) continue;
            if (s == cols_ + 1 || abs_less(D_[i][s], D_[i][j])) s = j;
          }
          if (s != cols_ + 1) pivot(i, s);
        }
      }
    }
    return run(1) ? Status::Optimal : Status::Unbounded;
  }

  T objective() const { return D_[rows_][cols_ + 1]; }

  std::vector<T> primal() const {
    std::vector<T> x(cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (B_[i] >= 0 && static_cast<std::size_t>(B_[i]) < cols_) x[B_[i]] = D_[i][cols_ + 1];
    }
    return x;
  }

  std::vector<T> dual() const {
    std::vector<T> y(rows_, T(0));
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (N_[j] >= static_cast<long>(cols_)) y[N_[j] - cols_] = D_[rows_][j];
    }
    return y;
  }

  const std::vector<long>& basic() const { return B_; }
  const std::vector<long>& nonbasic() const { return N_; }

 private:
  static bool abs_less(const T& a, const T& b) {
    if constexpr (std::is_same_v<T, double>) {
      return std::abs(a) < std::abs(b);
    } else {
      return Rational(abs(a)) < Rational(abs(b));
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    std::vector<T>& row = D_[r];
    const T inv = T(1) / row[s];
    support_.clear();
    for (std::size_t j = 0; j < cols_ + 2; ++j) {
      if (j != s && !A::zero(row[j])) support_.push_back(j);
    }
    T f;
    for (std::size_t i = 0; i < rows_ + 2; ++i) {
      if (i == r || A::zero(D_[i][s])) continue;
      std::vector<T>& other = D_[i];
      f = other[s] * inv;
      for (std::size_t j : support_) other[j] -= row[j] * f;
      other[s] = -f;
    }
    for (std::size_t j : support_) row[j] *= inv;
    row[s] = inv;
    std::swap(B_[r], N_[s]);
  }

  // phase 2 drives row R+1 (feasibility), phase 1 row R (the real objective).
  bool run(int phase) {
    const std::size_t x = phase == 2 ? rows_ + 1 : rows_;
    bool bland = bland_;
    std::size_t degenerate = 0;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > kIterationLimit) throw IterationLimit();
      std::size_t s = cols_ + 1;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (phase == 1 && N_[j] == -1) continue;
        if (!A::neg(D_[x][j])) continue;
        if (s == cols_ + 1) {
          s = j;
        } else if (bland) {
          if (N_[j] < N_[s]) s = j;
        } else if (D_[x][j] < D_[x][s] || (D_[x][j] == D_[x][s] && N_[j] < N_[s])) {
          s = j;
        }
      }
      if (s == cols_ + 1) return true;

      std::size_t r = rows_;
      T best{}, ratio{};
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!A::pos(D_[i][s])) continue;
        ratio = D_[i][cols_ + 1] / D_[i][s];
        if (r == rows_ || ratio < best || (ratio == best && B_[i] < B_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == rows_) return false;
      if constexpr (std::is_same_v<T, double>) {
        if (!bland && A::zero(best) && ++degenerate > kDegenerateLimit) bland = true;
        if (!A::zero(best)) degenerate = 0;
      }
      pivot(r, s);
    }
  }

  static constexpr std::size_t kIterationLimit = 200000;
  static constexpr std::size_t kDegenerateLimit = 50;

  std::size_t rows_, cols_;
  bool bland_;
  std::vector<std::vector<T>> D_;
  std::vector<long> B_, N_;
  std::vector<std::size_t> support_;
};

std::vector<Rational> snap(const std::vector<double>& values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(best_rational(v, 1L << 20));
  return out;
}

// Exact optimality certificate: primal and dual feasible with equal objectives.
bool certify(const StandardForm& form, const std::vector<Rational>& x,
             const std::vector<Rational>& y) {
  for (const Rational& v : x) {
    if (sgn(v) < 0) return false;
  }
  for (const Rational& v : y) {
    if (sgn(v) < 0) return false;
  }
  Rational lhs;
  for (std::size_t i = 0; i < form.rows.size(); ++i) {
    lhs = 0;
    for (const auto& [j, a] : form.rows[i]) {
      if (sgn(x[j]) != 0) lhs += a * x[j];
    }
    if (lhs > form.rhs[i]) return false;
  }
  std::vector<Rational> reduced(form.num_cols, Rational(0));
  Rational dual_obj = 0;
  for (std::size_t i = 0; i < form.rows.size(); ++i) {
    if (sgn(y[i]) == 0) continue;
    dual_obj += y[i] * form.rhs[i];
    for (const auto& [j, a] : form.rows[i]) reduced[j] += a * y[i];
  }
  Rational primal_obj = 0;
  for (std::size_t j = 0; j < form.num_cols; ++j) {
    if (reduced[j] < form.cost[j]) return false;
    if (sgn(x[j]) != 0) primal_obj += form.cost[j] * x[j];
  }
  return primal_obj == dual_obj;
}

// Solves M z = rhs exactly; nullopt when M is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M,
                                                  std::vector<Rational> rhs) {
  const std::size_t k = rhs.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t p = col;
    while (p < k && sgn(M[p][col]) == 0) ++p;
    if (p == k) return std::nullopt;
    std::swap(M[p], M[col]);
    std::swap(rhs[p], rhs[col]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col || sgn(M[i][col]) == 0) continue;
      const Rational f = M[i][col] / M[col][col];
      for (std::size_t j = col; j < k; ++j) {
        if (sgn(M[col][j]) != 0) M[i][j] -= f * M[col][j];
      }
      rhs[i] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < k; ++i) rhs[i] /= M[i][i];
  return rhs;
}

// Recomputes the vertex of the final double basis in exact arithmetic.
bool solve_basis(const StandardForm& form, const Dictionary<double>& dict,
                 std::vector<Rational>& x, std::vector<Rational>& y) {
  const std::size_t n = form.num_cols;
  std::vector<std::size_t> basic_cols, tight_rows;
  for (long b : dict.basic()) {
    if (b == -1) return false;
    if (static_cast<std::size_t>(b) < n) basic_cols.push_back(b);
  }
  for (long v : dict.nonbasic()) {
    if (v >= static_cast<long>(n)) tight_rows.push_back(v - n);
  }
  if (basic_cols.size() != tight_rows.size()) return false;
  const std::size_t k = basic_cols.size();
  std::vector<std::size_t> position(n, k);
  for (std::size_t t = 0; t < k; ++t) position[basic_cols[t]] = t;

  std::vector<std::vector<Rational>> M(k, std::vector<Rational>(k, Rational(0)));
  std::vector<std::vector<Rational>> Mt(k, std::vector<Rational>(k, Rational(0)));
  std::vector<Rational> b(k), c(k);
  for (std::size_t t = 0; t < k; ++t) {
    for (const auto& [j, a] : form.rows[tight_rows[t]]) {
      if (position[j] < k) {
        M[t][position[j]] = a;
        Mt[position[j]][t] = a;
      }
    }
    b[t] = form.rhs[tight_rows[t]];
    c[t] = form.cost[basic_cols[t]];
  }
  auto xb = solve_square(std::move(M), std::move(b));
  if (!xb) return false;
  auto yb = solve_square(std::move(Mt), std::move(c));
  if (!yb) return false;
  x.assign(n, Rational(0));
  y.assign(form.rows.size(), Rational(0));
  for (std::size_t t = 0; t < k; ++t) {
    x[basic_cols[t]] = (*xb)[t];
    y[tight_rows[t]] = (*yb)[t];
  }
  return true;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (sgn(b[j]) != 0) total += a[j] * b[j];
  }
  return total;
}

}  // namespace

Rational best_rational(double value, long max_den) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot rationalize a non-finite value");
  const bool negative = value < 0;
  const Rational exact(std::abs(value));
  mpz_class n = exact.get_num(), d = exact.get_den();
  if (d <= max_den) return negative ? Rational(-exact) : exact;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0, a, q2, t;
  while (d != 0) {
    a = n / d;
    q2 = q0 + a * q1;
    if (q2 > max_den) break;
    t = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = t;
    q1 = q2;
    t = n - a * d;
    n = d;
    d = t;
  }
  const mpz_class k = (mpz_class(max_den) - q0) / q1;
  Rational lo(p0 + k * p1, q0 + k * q1), hi(p1, q1);
  lo.canonicalize();
  hi.canonicalize();
  Rational best = abs(hi - exact) <= abs(lo - exact) ? hi : lo;
  return negative ? Rational(-best) : best;
}

StandardResult solve_exact_bland(const StandardForm& form) {
  Dictionary<Rational> dict(form, true);
  StandardResult result;
  result.status = dict.solve();
  if (result.status == Status::Optimal) {
    result.x = dict.primal();
    result.objective = dict.objective();
  }
  return result;
}

StandardResult solve_guided(const StandardForm& form) {
  Dictionary<double> dict(form, false);
  Status status;
  try {
    status = dict.solve();
  } catch (const IterationLimit&) {
    return solve_exact_bland(form);
  }
  // Infeasible and unbounded verdicts are re-derived exactly.
  if (status != Status::Optimal) return solve_exact_bland(form);

  std::vector<Rational> x = snap(dict.primal());
  std::vector<Rational> y = snap(dict.dual());
  if (!certify(form, x, y)) {
    if (!solve_basis(form, dict, x, y) || !certify(form, x, y)) return solve_exact_bland(form);
  }
  StandardResult result;
  result.status = Status::Optimal;
  result.objective = dot(form.cost, x);
  result.x = std::move(x);
  return result;
}

StandardResult solve_float(const StandardForm& form) {
  Dictionary<double> dict(form, false);
  Status status;
  try {
    status = dict.solve();
  } catch (const IterationLimit&) {
    return solve_guided(form);
  }
  StandardResult result;
  result.status = status;
  if (status != Status::Optimal) return result;

  constexpr double tol = 1e-9;
  const std::vector<double> xd = dict.primal();
  for (double v : xd) {
    if (v < -tol) return solve_guided(form);
  }
  for (std::size_t i = 0; i < form.rows.size(); ++i) {
    double lhs = 0;
    for (const auto& [j, a] : form.rows[i]) lhs += a.get_d() * xd[j];
    if (lhs > form.rhs[i].get_d() + tol) return solve_guided(form);
  }
  result.x.reserve(xd.size());
  for (double v : xd) result.x.emplace_back(std::max(v, 0.0));
  result.objective = dot(form.cost, result.x);
  return result;
}

}  // namespace metricfair::lp::detail
