#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

/// One use of a deterministic tie-break. Indices refer to the input profile.
struct TieBreakEvent {
  std::string stage;                ///< e.g. "copeland score", "stv round 2", "pairwise"
  std::vector<Alternative> tied;
  Alternative resolved_to = 0;      ///< the survivor (or the eliminee, for STV)
  std::string action;               ///< "wins", "beats" or "eliminated"
};

/// Outcome of a rule with its full audit trail.
struct RuleOutcome {
  AlternativeSet winner_set;
  std::vector<Alternative> selection_order;  ///< order of selection (recursive rules)
  std::vector<TieBreakEvent> tiebreak_events;
  std::vector<std::string> audit;            ///< human-readable per-round log

  /// The single winner; throws std::logic_error for multi-winner outcomes.
  Alternative winner() const;
};

/// Non-increasing, nonnegative per-position points.
class ScoringWeights {
 public:
  /// Throws std::invalid_argument if empty, negative, or increasing anywhere.
  explicit ScoringWeights(std::vector<Rational> weights);

  static ScoringWeights plurality(std::size_t m);
  static ScoringWeights borda(std::size_t m);
  /// k ones followed by zeros; 1 <= k <= m.
  static ScoringWeights k_approval(std::size_t m, std::size_t k);
  static ScoringWeights veto(std::size_t m);
  /// 1, 1/2, ..., 1/m.
  static ScoringWeights harmonic(std::size_t m);

  std::size_t size() const noexcept { return weights_.size(); }
  const Rational& operator[](std::size_t position) const { return weights_.at(position); }

 private:
  std::vector<Rational> weights_;
};

/// Most pairwise victories; score ties go to the lowest index.
RuleOutcome copeland(const Profile& profile);

/// Eliminates the alternative with fewest first places (ties: highest index) until one remains.
RuleOutcome stv(const Profile& profile);

/// Positional scoring; ties go to the lowest index. Throws std::invalid_argument
/// when the weight count differs from m.
RuleOutcome score_rule(const Profile& profile, const ScoringWeights& weights);

using SingleWinnerRule = std::function<RuleOutcome(const Profile&)>;

/// Applies `rule` `winners` times, deleting each winner from every ranking before
/// the next round. Throws std::out_of_range unless 1 <= winners <= m.
RuleOutcome recursive(const SingleWinnerRule& rule, const Profile& profile, std::size_t winners);

class UnknownRuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A rule resolved from its textual identifier.
struct Rule {
  std::string id;
  std::function<RuleOutcome(const Profile&)> apply;
};

/// Identifiers: copeland, stv, plurality, borda, veto, harmonic, kapproval:<k>,
/// scoring:<w1,...,wm>, and recursive:<rule>:<l>. Throws UnknownRuleError.
Rule parse_rule(std::string_view id);

}  // namespace metricfair
