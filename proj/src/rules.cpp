#include "metricfair/rules.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace metricfair {

Alternative RuleOutcome::winner() const {
  if (winner_set.size() != 1) throw std::logic_error("outcome has more than one winner");
  return winner_set.front();
}

ScoringWeights::ScoringWeights(std::vector<Rational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("scoring weights must be nonempty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 0) throw std::invalid_argument("scoring weights must be nonnegative");
    if (i + 1 < weights_.size() && weights_[i] < weights_[i + 1]) {
      throw std::invalid_argument("scoring weights must be non-increasing");
    }
  }
}

ScoringWeights ScoringWeights::plurality(std::size_t m) { return k_approval(m, 1); }

ScoringWeights ScoringWeights::borda(std::size_t m) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < m; ++i) w.emplace_back(static_cast<unsigned long>(m - 1 - i));
  return ScoringWeights(std::move(w));
}

ScoringWeights ScoringWeights::k_approval(std::size_t m, std::size_t k) {
  if (k < 1 || k > m) throw std::invalid_argument("k-approval needs 1 <= k <= m");
  std::vector<Rational> w(m, Rational(0));
  for (std::size_t i = 0; i < k; ++i) w[i] = 1;
  return ScoringWeights(std::move(w));
}

ScoringWeights ScoringWeights::veto(std::size_t m) {
  if (m < 2) return k_approval(m, 1);
  return k_approval(m, m - 1);
}

ScoringWeights ScoringWeights::harmonic(std::size_t m) {
  std::vector<Rational> w;
  for (std::size_t i = 1; i <= m; ++i) w.emplace_back(1, static_cast<unsigned long>(i));
  return ScoringWeights(std::move(w));
}

namespace {

std::vector<Alternative> argmax_set(const std::vector<Rational>& scores) {
  Rational best = *std::max_element(scores.begin(), scores.end());
  std::vector<Alternative> tied;
  for (Alternative c = 0; c < scores.size(); ++c) {
    if (scores[c] == best) tied.push_back(c);
  }
  return tied;
}

std::string score_line(const Profile& profile, const std::vector<Rational>& scores) {
  std::ostringstream out;
  for (Alternative c = 0; c < scores.size(); ++c) {
    out << (c ? " " : "") << profile.label(c) << "=" << to_string(scores[c]);
  }
  return out.str();
}

RuleOutcome single(Alternative winner, std::vector<TieBreakEvent> events,
                   std::vector<std::string> audit) {
  return RuleOutcome{AlternativeSet::singleton(winner), {winner}, std::move(events),
                     std::move(audit)};
}

}  // namespace

RuleOutcome copeland(const Profile& profile) {
  const std::size_t m = profile.num_alternatives();
  const PairwiseMatrix pairwise(profile);
  std::vector<TieBreakEvent> events;
  std::vector<Rational> scores(m, Rational(0));
  for (Alternative i = 0; i < m; ++i) {
    for (Alternative j = 0; j < m; ++j) {
      if (pairwise.beats(i, j)) scores[i] += 1;
      if (i < j && pairwise.is_tie(i, j)) {
        events.push_back({"pairwise", {i, j}, i, "beats"});
      }
    }
  }
  std::vector<Alternative> tied = argmax_set(scores);
  std::vector<std::string> audit{"copeland scores: " + score_line(profile, scores)};
  if (tied.size() > 1) {
    events.push_back({"copeland score", tied, tied.front(), "wins"});
    audit.push_back(std::to_string(tied.size()) + "-way score tie, index tie-break");
  }
  return single(tied.front(), std::move(events), std::move(audit));
}

RuleOutcome stv(const Profile& profile) {
  const std::size_t m = profile.num_alternatives();
  std::vector<bool> alive(m, true);
  std::size_t remaining = m;
  std::vector<TieBreakEvent> events;
  std::vector<std::string> audit;
  for (std::size_t round = 1; remaining > 1; ++round) {
    std::vector<std::size_t> firsts(m, 0);
    for (const Ranking& r : profile.rankings()) {
      for (Alternative c : r.order()) {
        if (alive[c]) {
          ++firsts[c];
          break;
        }
      }
    }
    std::size_t fewest = profile.num_agents() + 1;
    for (Alternative c = 0; c < m; ++c) {
      if (alive[c]) fewest = std::min(fewest, firsts[c]);
    }
    std::vector<Alternative> tied;
    for (Alternative c = 0; c < m; ++c) {
      if (alive[c] && firsts[c] == fewest) tied.push_back(c);
    }
    const Alternative eliminated = tied.back();
    std::ostringstream line;
    line << "stv round " << round << ":";
    for (Alternative c = 0; c < m; ++c) {
      if (alive[c]) line << ' ' << profile.label(c) << '=' << firsts[c];
    }
    line << "; eliminate " << profile.label(eliminated);
    audit.push_back(line.str());
    if (tied.size() > 1) {
      events.push_back({"stv round " + std::to_string(round), tied, eliminated, "eliminated"});
    }
    alive[eliminated] = false;
    --remaining;
  }
  const Alternative winner =
      static_cast<Alternative>(std::find(alive.begin(), alive.end(), true) - alive.begin());
  return single(winner, std::move(events), std::move(audit));
}

RuleOutcome score_rule(const Profile& profile, const ScoringWeights& weights) {
  const std::size_t m = profile.num_alternatives();
  if (weights.size() != m) {
    throw std::invalid_argument("scoring rule has " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(m) + " alternatives");
  }
  std::vector<Rational> scores(m, Rational(0));
  for (const Ranking& r : profile.rankings()) {
    auto order = r.order();
    for (std::size_t pos = 0; pos < m; ++pos) scores[order[pos]] += weights[pos];
  }
  std::vector<Alternative> tied = argmax_set(scores);
  std::vector<TieBreakEvent> events;
  std::vector<std::string> audit{"scores: " + score_line(profile, scores)};
  if (tied.size() > 1) {
    events.push_back({"score", tied, tied.front(), "wins"});
    audit.push_back(std::to_string(tied.size()) + "-way score tie, index tie-break");
  }
  return single(tied.front(), std::move(events), std::move(audit));
}

RuleOutcome recursive(const SingleWinnerRule& rule, const Profile& profile, std::size_t winners) {
  const std::size_t m = profile.num_alternatives();
  if (winners < 1 || winners > m) {
    throw std::out_of_range("number of winners must lie in [1, m]");
  }
  std::vector<Alternative> remaining(m);
  for (Alternative c = 0; c < m; ++c) remaining[c] = c;

  std::vector<Alternative> order;
  std::vector<TieBreakEvent> events;
  std::vector<std::string> audit;
  for (std::size_t pick = 1; pick <= winners; ++pick) {
    RestrictedProfile reduced = restrict_profile(profile, remaining);
    RuleOutcome outcome = rule(reduced.profile);
    const Alternative chosen = reduced.original[outcome.winner()];
    const std::string prefix = "pick " + std::to_string(pick) + ": ";
    for (TieBreakEvent& e : outcome.tiebreak_events) {
      for (Alternative& c : e.tied) c = reduced.original[c];
      e.resolved_to = reduced.original[e.resolved_to];
      e.stage = prefix + e.stage;
      events.push_back(std::move(e));
    }
    for (std::string& line : outcome.audit) audit.push_back(prefix + line);
    audit.push_back(prefix + "selected " + profile.label(chosen));
    order.push_back(chosen);
    remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
  }
  return RuleOutcome{AlternativeSet(order), order, std::move(events), std::move(audit)};
}

namespace {

std::size_t parse_count(std::string_view text, std::string_view id) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UnknownRuleError("bad number in rule id '" + std::string(id) + "'");
  }
  return value;
}

}  // namespace

Rule parse_rule(std::string_view id) {
  const std::string name(id);
  if (id == "copeland") return {name, [](const Profile& p) { return copeland(p); }};
  if (id == "stv") return {name, [](const Profile& p) { return stv(p); }};
  if (id == "plurality") {
    return {name, [](const Profile& p) {
              return score_rule(p, ScoringWeights::plurality(p.num_alternatives()));
            }};
  }
  if (id == "borda") {
    return {name, [](const Profile& p) {
              return score_rule(p, ScoringWeights::borda(p.num_alternatives()));
            }};
  }
  if (id == "veto") {
    return {name, [](const Profile& p) {
              return score_rule(p, ScoringWeights::veto(p.num_alternatives()));
            }};
  }
  if (id == "harmonic") {
    return {name, [](const Profile& p) {
              return score_rule(p, ScoringWeights::harmonic(p.num_alternatives()));
            }};
  }
  if (id.starts_with("kapproval:")) {
    const std::size_t k = parse_count(id.substr(10), id);
    if (k == 0) throw UnknownRuleError("kapproval needs k >= 1");
    return {name, [k](const Profile& p) {
              return score_rule(p, ScoringWeights::k_approval(p.num_alternatives(), k));
            }};
  }
  if (id.starts_with("scoring:")) {
    std::vector<Rational> weights;
    std::string_view rest = id.substr(8);
    while (true) {
      auto comma = rest.find(',');
      try {
        weights.push_back(parse_rational(rest.substr(0, comma)));
      } catch (const std::invalid_argument&) {
        throw UnknownRuleError("bad weight in rule id '" + name + "'");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    ScoringWeights w = [&] {
      try {
        return ScoringWeights(weights);
      } catch (const std::invalid_argument& e) {
        throw UnknownRuleError(std::string(e.what()) + " in rule id '" + name + "'");
      }
    }();
    return {name, [w](const Profile& p) { return score_rule(p, w); }};
  }
  if (id.starts_with("recursive:")) {
    std::string_view rest = id.substr(10);
    auto colon = rest.rfind(':');
    if (colon == std::string_view::npos) {
      throw UnknownRuleError("expected recursive:<rule>:<l>, got '" + name + "'");
    }
    std::string_view inner_id = rest.substr(0, colon);
    if (inner_id.starts_with("recursive:")) {
      throw UnknownRuleError("nested recursive rules are not supported");
    }
    const std::size_t winners = parse_count(rest.substr(colon + 1), id);
    Rule inner = parse_rule(inner_id);
    return {name, [inner, winners](const Profile& p) {
              return recursive(inner.apply, p, winners);
            }};
  }
  throw UnknownRuleError("unknown rule '" + name + "'");
}

}  // namespace metricfair
