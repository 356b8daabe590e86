#include "metricfair/metric.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace metricfair {

AlternativeSet::AlternativeSet(std::vector<Alternative> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("alternative set must be nonempty");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw std::invalid_argument("alternative set has duplicates");
  }
}

bool AlternativeSet::contains(Alternative c) const {
  return std::binary_search(members_.begin(), members_.end(), c);
}

void AlternativeSet::check_within(std::size_t m) const {
  if (members_.back() >= m) {
    throw std::out_of_range("alternative " + std::to_string(members_.back()) +
                            " out of range (m = " + std::to_string(m) + ")");
  }
}

std::string AlternativeSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i]);
  }
  return out + "}";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ typedef unsigned __int128 wide;
  wide result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<AlternativeSet> all_subsets(std::size_t m, std::size_t size) {
  std::vector<AlternativeSet> result;
  if (size == 0 || size > m) return result;
  std::vector<Alternative> current(size);
  for (std::size_t i = 0; i < size; ++i) current[i] = i;
  while (true) {
    result.emplace_back(current);
    std::size_t i = size;
    while (i > 0 && current[i - 1] == m - size + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < size; ++j) current[j] = current[j - 1] + 1;
  }
  return result;
}

CostMatrix::CostMatrix(std::size_t agents, std::size_t alternatives, const Rational& fill)
    : agents_(agents), alternatives_(alternatives), cells_(agents * alternatives, fill) {
  if (agents == 0 || alternatives == 0) {
    throw std::invalid_argument("cost matrix needs at least one agent and one alternative");
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty cost matrix");
  CostMatrix costs(rows.size(), rows.front().size());
  for (Agent v = 0; v < rows.size(); ++v) {
    if (rows[v].size() != costs.alternatives_) throw std::invalid_argument("ragged cost matrix");
    for (Alternative c = 0; c < rows[v].size(); ++c) costs.at(v, c) = rows[v][c];
  }
  return costs;
}

std::size_t CostMatrix::index(Agent v, Alternative c) const {
  if (v >= agents_ || c >= alternatives_) throw std::out_of_range("cost matrix index");
  return v * alternatives_ + c;
}

Rational CostMatrix::set_cost(Agent v, const AlternativeSet& set) const {
  Rational total = 0;
  for (Alternative c : set) total += at(v, c);
  return total;
}

CostMatrix CostMatrix::scaled(const Rational& factor) const {
  CostMatrix out = *this;
  for (Rational& x : out.cells_) x *= factor;
  return out;
}

CostMatrix parse_cost_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  std::vector<std::vector<std::string>> rows;
  std::size_t header_line = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::vector<std::string> row;
    for (std::string t; tokens >> t;) row.push_back(t);
    if (row.empty()) continue;
    if (header.empty()) {
      header = row;
      header_line = number;
      continue;
    }
    rows.push_back(row);
    rows.back().push_back(std::to_string(number));  // remember the line number
  }
  if (header.size() != 2) throw ParseError(header_line ? header_line : 1, "expected 'N m' header");
  std::size_t agents = 0, alternatives = 0;
  try {
    agents = std::stoul(header[0]);
    alternatives = std::stoul(header[1]);
  } catch (const std::exception&) {
    throw ParseError(header_line, "expected 'N m' header");
  }
  if (agents == 0 || alternatives == 0) throw ParseError(header_line, "N and m must be positive");
  if (rows.size() != agents) {
    throw ParseError(number, "expected " + std::to_string(agents) + " rows, found " +
                                 std::to_string(rows.size()));
  }
  CostMatrix costs(agents, alternatives);
  for (Agent v = 0; v < agents; ++v) {
    const std::size_t line_no = std::stoul(rows[v].back());
    rows[v].pop_back();
    if (rows[v].size() != alternatives) {
      throw ParseError(line_no, "expected " + std::to_string(alternatives) + " entries");
    }
    for (Alternative c = 0; c < alternatives; ++c) {
      Rational value;
      try {
        value = parse_rational(rows[v][c]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      if (value < 0) throw ParseError(line_no, "negative cost");
      costs.at(v, c) = value;
    }
  }
  return costs;
}

std::string serialize_cost_matrix(const CostMatrix& costs) {
  std::ostringstream out;
  out << costs.num_agents() << ' ' << costs.num_alternatives() << '\n';
  for (Agent v = 0; v < costs.num_agents(); ++v) {
    for (Alternative c = 0; c < costs.num_alternatives(); ++c) {
      out << (c ? " " : "") << to_string(costs.at(v, c));
    }
    out << '\n';
  }
  return out.str();
}

std::string MetricViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::NegativeCost:
      out << "negative cost d(" << v << "," << c << ")";
      break;
    case Kind::Quadrilateral:
      out << "quadrilateral inequality fails: d(" << v << "," << c << ") > d(" << v << "," << c2
          << ") + d(" << v2 << "," << c2 << ") + d(" << v2 << "," << c << ")";
      break;
    case Kind::Ranking:
      out << "agent " << v << " ranks " << c << " above " << c2 << " but pays more for it";
      break;
  }
  return out.str();
}

CheckReport is_qmetric(const CostMatrix& costs, const Rational& tolerance) {
  const std::size_t n = costs.num_agents();
  const std::size_t m = costs.num_alternatives();
  for (Agent v = 0; v < n; ++v) {
    for (Alternative c = 0; c < m; ++c) {
      if (costs.at(v, c) < -tolerance) {
        return {false, MetricViolation{MetricViolation::Kind::NegativeCost, v, v, c, c}};
      }
    }
  }
  Rational rhs;
  for (Agent v = 0; v < n; ++v) {
    for (Agent v2 = 0; v2 < n; ++v2) {
      for (Alternative c = 0; c < m; ++c) {
        for (Alternative c2 = 0; c2 < m; ++c2) {
          rhs = costs.at(v, c2) + costs.at(v2, c2) + costs.at(v2, c) + tolerance;
          if (costs.at(v, c) > rhs) {
            return {false, MetricViolation{MetricViolation::Kind::Quadrilateral, v, v2, c, c2}};
          }
        }
      }
    }
  }
  return {};
}

CheckReport is_consistent(const CostMatrix& costs, const Profile& profile,
                          const Rational& tolerance) {
  if (costs.num_agents() != profile.num_agents() ||
      costs.num_alternatives() != profile.num_alternatives()) {
    throw std::invalid_argument("cost matrix and profile dimensions differ");
  }
  for (Agent v = 0; v < profile.num_agents(); ++v) {
    auto order = profile.ranking(v).order();
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if (costs.at(v, order[i]) > costs.at(v, order[i + 1]) + tolerance) {
        return {false,
                MetricViolation{MetricViolation::Kind::Ranking, v, v, order[i], order[i + 1]}};
      }
    }
  }
  return {};
}

Rational phi(const AlternativeSet& set, const CostMatrix& costs) {
  set.check_within(costs.num_alternatives());
  Rational total = 0;
  for (Agent v = 0; v < costs.num_agents(); ++v) total += costs.set_cost(v, set);
  return total;
}

namespace {

std::vector<Rational> per_agent_costs(const AlternativeSet& set, const CostMatrix& costs) {
  std::vector<Rational> out;
  out.reserve(costs.num_agents());
  for (Agent v = 0; v < costs.num_agents(); ++v) out.push_back(costs.set_cost(v, set));
  return out;
}

// prefix[k] = sum of the k largest entries
std::vector<Rational> top_k_sums(std::vector<Rational> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<Rational> prefix(values.size() + 1, Rational(0));
  for (std::size_t i = 0; i < values.size(); ++i) prefix[i + 1] = prefix[i] + values[i];
  return prefix;
}

}  // namespace

Rational phi_k(const AlternativeSet& set, std::size_t k, const CostMatrix& costs) {
  if (k < 1 || k > costs.num_agents()) {
    throw std::out_of_range("k must lie in [1, N]; got " + std::to_string(k));
  }
  set.check_within(costs.num_alternatives());
  return top_k_sums(per_agent_costs(set, costs))[k];
}

DistortionRatio ratio_distortion(const AlternativeSet& set, const CostMatrix& costs) {
  const std::size_t m = costs.num_alternatives();
  set.check_within(m);
  const std::size_t ell = set.size();

  // phi is additive over members, so the optimum is the ell cheapest alternatives.
  std::vector<std::pair<Rational, Alternative>> by_cost;
  for (Alternative c = 0; c < m; ++c) by_cost.emplace_back(phi(AlternativeSet::singleton(c), costs), c);
  std::stable_sort(by_cost.begin(), by_cost.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Alternative> best;
  Rational best_cost = 0;
  for (std::size_t i = 0; i < ell; ++i) {
    best.push_back(by_cost[i].second);
    best_cost += by_cost[i].first;
  }
  bool degenerate = false;
  Ratio value = Ratio::divide(phi(set, costs), best_cost, &degenerate);
  return {std::move(value), AlternativeSet(std::move(best)), degenerate};
}

FairnessRatio ratio_fairness(const AlternativeSet& set, const CostMatrix& costs) {
  const std::size_t m = costs.num_alternatives();
  const std::size_t n = costs.num_agents();
  set.check_within(m);

  const std::vector<Rational> own = top_k_sums(per_agent_costs(set, costs));
  std::vector<AlternativeSet> candidates = all_subsets(m, set.size());
  std::vector<std::vector<Rational>> candidate_sums;
  candidate_sums.reserve(candidates.size());
  for (const AlternativeSet& t : candidates) candidate_sums.push_back(top_k_sums(per_agent_costs(t, costs)));

  FairnessRatio best{Ratio(Rational(0)), 1, set, false};
  bool have_best = false;
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (candidate_sums[i][k] < candidate_sums[argmin][k]) argmin = i;
    }
    bool degenerate = false;
    Ratio value = Ratio::divide(own[k], candidate_sums[argmin][k], &degenerate);
    best.degenerate = best.degenerate || degenerate;
    if (!have_best || value > best.value) {
      best.value = value;
      best.k_star = k;
      best.adversary = candidates[argmin];
      have_best = true;
    }
  }
  return best;
}

}  // namespace metricfair
