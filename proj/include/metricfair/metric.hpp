#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

/// A sorted set of distinct alternatives, 1 <= size.
class AlternativeSet {
 public:
  /// Sorts the members. Throws std::invalid_argument on empty input or duplicates.
  explicit AlternativeSet(std::vector<Alternative> members);
  static AlternativeSet singleton(Alternative c) { return AlternativeSet({c}); }

  std::size_t size() const noexcept { return members_.size(); }
  std::span<const Alternative> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  Alternative front() const { return members_.front(); }
  bool contains(Alternative c) const;
  /// Throws std::out_of_range unless every member is < m.
  void check_within(std::size_t m) const;

  /// "{0,2}"
  std::string str() const;

  friend bool operator==(const AlternativeSet&, const AlternativeSet&) = default;
  friend bool operator<(const AlternativeSet& a, const AlternativeSet& b) {
    return a.members_ < b.members_;
  }

 private:
  std::vector<Alternative> members_;
};

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All size-`size` subsets of {0,...,m-1} in lexicographic order.
std::vector<AlternativeSet> all_subsets(std::size_t m, std::size_t size);

/// Agent-to-alternative costs d(v, c) for N agents and m alternatives.
///
/// Only the agent-alternative block of a metric is ever represented: any
/// matrix satisfying the quadrilateral inequality extends to a full metric
/// on agents and alternatives, so the other distances are never needed.
class CostMatrix {
 public:
  CostMatrix(std::size_t agents, std::size_t alternatives, const Rational& fill = Rational(0));
  /// Throws std::invalid_argument on ragged or empty input.
  static CostMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t num_agents() const noexcept { return agents_; }
  std::size_t num_alternatives() const noexcept { return alternatives_; }

  Rational& at(Agent v, Alternative c) { return cells_[index(v, c)]; }
  const Rational& at(Agent v, Alternative c) const { return cells_[index(v, c)]; }

  /// d(v, S) = sum of d(v, c) over c in S.
  Rational set_cost(Agent v, const AlternativeSet& set) const;
  CostMatrix scaled(const Rational& factor) const;

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  std::size_t index(Agent v, Alternative c) const;

  std::size_t agents_;
  std::size_t alternatives_;
  std::vector<Rational> cells_;
};

/// Text format: "N m" then N rows of m nonnegative rationals ("p/q" or decimal).
CostMatrix parse_cost_matrix(std::string_view text);
std::string serialize_cost_matrix(const CostMatrix& costs);

struct MetricViolation {
  enum class Kind { NegativeCost, Quadrilateral, Ranking };
  Kind kind;
  Agent v = 0;
  Agent v2 = 0;          ///< second agent (Quadrilateral)
  Alternative c = 0;
  Alternative c2 = 0;    ///< second alternative (Quadrilateral, Ranking)

  std::string describe() const;
};

struct CheckReport {
  bool ok = true;
  std::optional<MetricViolation> violation;
  explicit operator bool() const noexcept { return ok; }
};

/// Exhaustive check of nonnegativity and d(v,c) <= d(v,c') + d(v',c') + d(v',c)
/// over all agents v, v' and alternatives c, c'. Reports the first failure in
/// (v, v', c, c') order. A positive `tolerance` relaxes every comparison.
CheckReport is_qmetric(const CostMatrix& costs, const Rational& tolerance = Rational(0));

/// Each agent's costs must be non-decreasing along her ranking. Only adjacent
/// ranking positions are compared; transitivity of <= covers the rest.
/// Throws std::invalid_argument on a dimension mismatch.
CheckReport is_consistent(const CostMatrix& costs, const Profile& profile,
                          const Rational& tolerance = Rational(0));

/// Membership in the set of metrics consistent with the profile.
inline bool is_consistent_metric(const CostMatrix& costs, const Profile& profile) {
  return is_qmetric(costs).ok && is_consistent(costs, profile).ok;
}

/// Social cost: total over agents and members of `set`.
Rational phi(const AlternativeSet& set, const CostMatrix& costs);

/// Sum of the k largest per-agent set costs. Throws std::out_of_range unless 1 <= k <= N.
Rational phi_k(const AlternativeSet& set, std::size_t k, const CostMatrix& costs);

struct DistortionRatio {
  Ratio value;
  AlternativeSet optimum;   ///< a social-cost-minimizing set of the same size
  bool degenerate = false;  ///< 0/0 was read as 1
};

struct FairnessRatio {
  Ratio value;
  std::size_t k_star = 1;   ///< first k attaining the maximum
  AlternativeSet adversary; ///< phi_k minimizer at k_star
  bool degenerate = false;  ///< some per-k ratio was 0/0
};

/// phi(S) divided by the least phi over all sets of |S| alternatives.
DistortionRatio ratio_distortion(const AlternativeSet& set, const CostMatrix& costs);

/// max over k of phi_k(S) / min over |S|-sets T of phi_k(T). The minimizer is
/// found by enumerating every T, since phi_k is not additive over members.
FairnessRatio ratio_fairness(const AlternativeSet& set, const CostMatrix& costs);

}  // namespace metricfair
