#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricfair/lp.hpp"
#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

/// Linear rows describing every metric consistent with a profile, over the
/// N*m variables d(v,c) stored at index v*m + c. All rows have rhs 0.
struct ConsistencySystem {
  std::size_t agents = 0;
  std::size_t alternatives = 0;
  std::vector<lp::Constraint> nonnegativity;   // N*m rows
  std::vector<lp::Constraint> ranking;         // N*(m-1) rows
  std::vector<lp::Constraint> quadrilateral;   // N(N-1)*m(m-1) rows

  std::size_t num_vars() const noexcept { return agents * alternatives; }
  std::size_t var(Agent v, Alternative c) const noexcept { return v * alternatives + c; }
  std::size_t num_rows() const noexcept {
    return nonnegativity.size() + ranking.size() + quadrilateral.size();
  }
  /// Adds the ranking and quadrilateral rows to `lp`. Nonnegativity is left
  /// to the default variable bounds.
  void install(lp::LinearProgram& lp) const;
};

ConsistencySystem build_consistency_system(const Profile& profile);

/// Edge (i,j) iff at least one agent ranks i above j.
class ReachabilityGraph {
 public:
  explicit ReachabilityGraph(const Profile& profile);

  std::size_t size() const noexcept { return m_; }
  bool has_edge(Alternative i, Alternative j) const { return edges_.at(i * m_ + j); }
  /// Breadth-first closure; includes `from` itself.
  std::vector<bool> reachable_from(Alternative from) const;

 private:
  std::size_t m_;
  std::vector<bool> edges_;
};

enum class Boundedness { Bounded, Unbounded };

/// Whether the ratio of S against the adversary T stays finite over all
/// consistent metrics: every member of S must reach some member of T.
/// Throws std::invalid_argument when |S| != |T|.
Boundedness boundedness(const Profile& profile, const AlternativeSet& S, const AlternativeSet& T);

/// l * 3^m. Throws std::invalid_argument when m == 0.
Rational big_m(std::size_t m, std::size_t ell = 1);

/// max phi(S) subject to phi(T) <= 1 and consistency.
lp::LinearProgram build_distortion_lp(const ConsistencySystem& system, const AlternativeSet& S,
                                      const AlternativeSet& T);

/// Column layout of the fairness program (after the N*m metric variables).
struct FairnessLayout {
  std::size_t agents = 0;
  std::size_t base = 0;
  std::size_t top(Agent i) const { return base + i; }                ///< d_i
  std::size_t selector(Agent i) const { return base + agents + i; }  ///< b_i
  std::size_t excess(Agent i) const { return base + 2 * agents + i; }///< d_i^(opt)
  std::size_t threshold() const { return base + 3 * agents; }        ///< t
};

/// max sum d_i subject to d_i <= d(v_i,S), d_i <= M b_i, sum b_i <= k,
/// k t + sum d_i^(opt) <= 1, d_i^(opt) >= d(v_i,T) - t, and consistency.
/// At the optimum the objective is phi_k(S) with phi_k(T) normalized to 1.
lp::MilpProblem build_fairness_milp(const ConsistencySystem& system, const AlternativeSet& S,
                                    const AlternativeSet& T, std::size_t k, const Rational& M);
FairnessLayout fairness_layout(const ConsistencySystem& system);

enum class WorstCaseObjective { Distortion, Fairness };

class GuardrailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EngineOptions {
  lp::Mode mode = lp::Mode::Rational;
  std::size_t jobs = 1;
  bool force = false;       ///< lift the N <= 16, C(m,l) <= 10^4 guardrails
  bool use_cutoff = true;   ///< sequential sweeps prune with the best value so far
};

struct WorstCaseResult {
  WorstCaseObjective objective = WorstCaseObjective::Distortion;
  Ratio value;
  Boundedness status = Boundedness::Bounded;
  std::optional<CostMatrix> witness;  ///< Bounded only
  AlternativeSet adversary{{0}};
  std::size_t k_star = 1;             ///< fairness only
  std::size_t subproblems = 0;        ///< LPs / MILPs actually solved
  std::size_t nodes = 0;              ///< relaxations solved in total
  bool set_policy = false;            ///< Unbounded verdict for |S| > 1
};

/// Sup over consistent metrics of phi(S) / min_T phi(T). Throws GuardrailError,
/// or std::out_of_range when S does not fit the profile.
WorstCaseResult worst_distortion(const Profile& profile, const AlternativeSet& S,
                                 const EngineOptions& options = {});

/// Sup over consistent metrics of max_k phi_k(S) / min_T phi_k(T). Subproblems
/// run k ascending, then T lexicographic; ties keep the first. The set itself
/// seeds the sweep at (k=1, T=S) with value 1.
WorstCaseResult worst_fairness(const Profile& profile, const AlternativeSet& S,
                               const EngineOptions& options = {});

/// {value, status, objective, k_star, adversary, witness, subproblems, nodes,
/// set_policy}. Values are "p/q" strings, or decimals when digits >= 0.
nlohmann::json to_json(const WorstCaseResult& result, int decimal_digits = -1);

}  // namespace metricfair
