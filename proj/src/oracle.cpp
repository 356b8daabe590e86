#include "metricfair/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>

namespace metricfair {

std::vector<Rational> GridSearchConfig::default_grid() {
  std::vector<Rational> grid;
  for (long i = 1; i <= 12; ++i) grid.emplace_back(i, 4);
  for (Rational& g : grid) g.canonicalize();
  return grid;
}

GridSearchConfig GridSearchConfig::with_zero() {
  GridSearchConfig config;
  config.grid.insert(config.grid.begin(), Rational(0));
  return config;
}

namespace {

__extension__ typedef __int128 Wide;

// Fixed-metric ratio num/den with the 0/0 = 1 and x/0 = inf conventions.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction of(std::int64_t num, std::int64_t den) {
    if (den == 0) return num == 0 ? Fraction{1, 1} : Fraction{1, 0};
    return {num, den};
  }
  bool greater(const Fraction& o) const {
    if (den == 0) return o.den != 0;
    if (o.den == 0) return false;
    return Wide(num) * o.den > Wide(o.num) * den;
  }
};

class Search {
 public:
  Search(const Profile& profile, const AlternativeSet& S, OracleMode mode,
         const std::vector<std::int64_t>& grid)
      : profile_(profile),
        mode_(mode),
        grid_(grid),
        n_(profile.num_agents()),
        m_(profile.num_alternatives()),
        set_(S.begin(), S.end()),
        cells_(n_ * m_, 0),
        index_(n_ * m_, 0),
        assigned_(n_ * m_, false) {
    for (const AlternativeSet& T : all_subsets(m_, S.size())) {
      adversaries_.emplace_back(T.begin(), T.end());
    }
  }

  // Enumerates every completion whose first cell takes grid value `first`.
  void run_partition(std::size_t first) { place(0, first); }

  const Fraction& best() const { return best_; }
  bool found() const { return found_; }
  const std::vector<std::int64_t>& best_cells() const { return best_cells_; }
  std::uint64_t examined() const { return examined_; }

 private:
  Agent agent_of(std::size_t step) const { return step / m_; }
  Alternative alt_of(std::size_t step) const {
    return profile_.ranking(step / m_).at(step % m_);
  }
  std::int64_t& cell(Agent v, Alternative c) { return cells_[v * m_ + c]; }

  void place(std::size_t step, std::size_t only = SIZE_MAX) {
    if (step == n_ * m_) {
      evaluate();
      return;
    }
    const Agent v = agent_of(step);
    const Alternative c = alt_of(step);
    const std::size_t lo = step % m_ == 0 ? 0 : index_[v * m_ + alt_of(step - 1)];
    for (std::size_t g = lo; g < grid_.size(); ++g) {
      if (only != SIZE_MAX && g != only) continue;
      cell(v, c) = grid_[g];
      index_[v * m_ + c] = g;
      assigned_[v * m_ + c] = true;
      if (rectangles_ok(v, c)) place(step + 1);
      assigned_[v * m_ + c] = false;
    }
  }

  // Every rectangle {v, v'} x {c, c'} completed by this cell.
  bool rectangles_ok(Agent v, Alternative c) {
    for (Agent w = 0; w < v; ++w) {
      for (Alternative x = 0; x < m_; ++x) {
        if (x == c || !assigned_[v * m_ + x]) continue;
        const std::int64_t a = cell(v, c), b = cell(v, x), e = cell(w, x), f = cell(w, c);
        const std::int64_t top = std::max({a, b, e, f});
        if (2 * top > a + b + e + f) return false;
      }
    }
    return true;
  }

  std::int64_t set_cost(Agent v, const std::vector<Alternative>& set) {
    std::int64_t total = 0;
    for (Alternative c : set) total += cell(v, c);
    return total;
  }

  void evaluate() {
    ++examined_;
    Fraction value;
    if (mode_ == OracleMode::Distortion) {
      std::int64_t num = 0;
      for (Agent v = 0; v < n_; ++v) num += set_cost(v, set_);
      std::int64_t den = num;
      for (const auto& T : adversaries_) {
        std::int64_t cost = 0;
        for (Agent v = 0; v < n_; ++v) cost += set_cost(v, T);
        den = std::min(den, cost);
      }
      value = Fraction::of(num, den);
    } else {
      own_.resize(n_);
      for (Agent v = 0; v < n_; ++v) own_[v] = set_cost(v, set_);
      std::sort(own_.begin(), own_.end(), std::greater<>());
      prefix_min_.assign(n_ + 1, INT64_MAX);
      for (const auto& T : adversaries_) {
        other_.resize(n_);
        for (Agent v = 0; v < n_; ++v) other_[v] = set_cost(v, T);
        std::sort(other_.begin(), other_.end(), std::greater<>());
        std::int64_t running = 0;
        for (std::size_t k = 1; k <= n_; ++k) {
          running += other_[k - 1];
          prefix_min_[k] = std::min(prefix_min_[k], running);
        }
      }
      std::int64_t running = 0;
      bool first = true;
      for (std::size_t k = 1; k <= n_; ++k) {
        running += own_[k - 1];
        const Fraction r = Fraction::of(running, prefix_min_[k]);
        if (first || r.greater(value)) value = r;
        first = false;
      }
    }
    if (!found_ || value.greater(best_)) {
      best_ = value;
      best_cells_ = cells_;
      found_ = true;
    }
  }

  const Profile& profile_;
  OracleMode mode_;
  const std::vector<std::int64_t>& grid_;
  std::size_t n_, m_;
  std::vector<Alternative> set_;
  std::vector<std::vector<Alternative>> adversaries_;
  std::vector<std::int64_t> cells_;
  std::vector<std::size_t> index_;
  std::vector<bool> assigned_;
  std::vector<std::int64_t> own_, other_, prefix_min_;

  Fraction best_;
  bool found_ = false;
  std::vector<std::int64_t> best_cells_;
  std::uint64_t examined_ = 0;
};

}  // namespace

OracleResult oracle_worst_ratio(const Profile& profile, const AlternativeSet& S, OracleMode mode,
                                const GridSearchConfig& config) {
  S.check_within(profile.num_alternatives());
  const std::vector<Rational>& grid = config.grid;
  if (grid.empty()) throw std::invalid_argument("grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (sgn(grid[i]) < 0) throw std::invalid_argument("grid values must be nonnegative");
    if (i > 0 && grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must be ascending");
  }
  const std::size_t cells = profile.num_agents() * profile.num_alternatives();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    if (total > config.max_cells / grid.size()) {
      throw EnumerationCapError("grid^(N*m) exceeds the cap of " + std::to_string(config.max_cells));
    }
    total *= grid.size();
  }

  // Integer grid: multiply through by the common denominator.
  mpz_class scale = 1;
  for (const Rational& g : grid) scale = lcm(scale, g.get_den());
  std::vector<std::int64_t> ints;
  for (const Rational& g : grid) {
    const mpz_class v = g.get_num() * (scale / g.get_den());
    if (v > (1L << 40) / static_cast<long>(cells + 1)) {
      throw std::invalid_argument("grid values too large for exact integer search");
    }
    ints.push_back(v.get_si());
  }

  const std::size_t parts = grid.size();
  std::vector<Search> searches;
  searches.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) searches.emplace_back(profile, S, mode, ints);
  if (config.jobs <= 1) {
    for (std::size_t p = 0; p < parts; ++p) searches[p].run_partition(p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(config.jobs, parts); ++t) {
      pool.emplace_back([&] {
        for (std::size_t p; (p = next.fetch_add(1)) < parts;) searches[p].run_partition(p);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  OracleResult result;
  const Search* winner = nullptr;
  for (const Search& s : searches) {
    result.metrics_examined += s.examined();
    if (s.found() && (!winner || s.best().greater(winner->best()))) winner = &s;
  }
  if (!winner) return result;  // unreachable: constant matrices are always consistent

  CostMatrix d(profile.num_agents(), profile.num_alternatives());
  for (Agent v = 0; v < profile.num_agents(); ++v) {
    for (Alternative c = 0; c < profile.num_alternatives(); ++c) {
      d.at(v, c) = Rational(mpz_class(winner->best_cells()[v * profile.num_alternatives() + c]), scale);
      d.at(v, c).canonicalize();
    }
  }
  // Re-derive the value from the witness with the metric module.
  if (!is_consistent_metric(d, profile)) throw std::logic_error("oracle witness is not consistent");
  result.value = mode == OracleMode::Distortion ? ratio_distortion(S, d).value
                                                : ratio_fairness(S, d).value;
  const Fraction& f = winner->best();
  Rational exact(f.num, f.den == 0 ? 1 : f.den);
  exact.canonicalize();
  const Ratio expected = f.den == 0 ? Ratio::infinity() : Ratio(exact);
  if (result.value != expected) throw std::logic_error("oracle witness does not reproduce its ratio");
  result.witness = std::move(d);
  return result;
}

}  // namespace metricfair
