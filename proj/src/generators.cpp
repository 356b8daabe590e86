#include "metricfair/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "metricfair/worst_case.hpp"

namespace metricfair {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below needs n > 0");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance line_family(std::size_t agents, const Rational& delta) {
  if (agents < 2) throw std::invalid_argument("line family needs N >= 2");
  if (sgn(delta) < 0 || delta >= 1) throw std::invalid_argument("line family needs 0 <= delta < 1");
  std::vector<Ranking> rankings;
  rankings.emplace_back(std::vector<Alternative>{1, 0});
  for (std::size_t v = 1; v < agents; ++v) rankings.emplace_back(std::vector<Alternative>{0, 1});
  CostMatrix d(agents, 2, Rational(1));
  d.at(0, 0) = 3 - delta;
  for (Agent v = 1; v < agents; ++v) d.at(v, 0) = 1 - delta;
  return {Profile(2, std::move(rankings), {"c1", "c2"}), std::move(d)};
}

CostMatrix floor_metric(const Profile& profile, Alternative c, Agent v, Alternative c_adv) {
  if (!profile.prefers(v, c_adv, c)) {
    throw std::invalid_argument("agent " + std::to_string(v) + " must rank " +
                                std::to_string(c_adv) + " above " + std::to_string(c));
  }
  CostMatrix d(profile.num_agents(), profile.num_alternatives(), Rational(1));
  for (Alternative x = 0; x < profile.num_alternatives(); ++x) {
    if (profile.prefers(v, c_adv, x)) d.at(v, x) = 3;
  }
  return d;
}

CostMatrix two_cluster_metric(const Profile& profile, Alternative c, const Rational& epsilon) {
  if (sgn(epsilon) <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
  const std::vector<bool> reach = ReachabilityGraph(profile).reachable_from(c);
  CostMatrix d(profile.num_agents(), profile.num_alternatives(), epsilon);
  for (Agent v = 0; v < profile.num_agents(); ++v) {
    for (Alternative x = 0; x < profile.num_alternatives(); ++x) {
      if (reach[x]) d.at(v, x) = 1;
    }
  }
  return d;
}

namespace {

const Rational kQuantum(1, 1 << 20);

Rational padded_distance(double squared) {
  const double units = std::ceil(std::sqrt(squared) * (1 << 20));
  return Rational(units) * kQuantum + kQuantum;
}

}  // namespace

Instance instance_from_points(const std::vector<std::vector<double>>& agent_points,
                              const std::vector<std::vector<double>>& alternative_points) {
  if (agent_points.empty() || alternative_points.empty()) {
    throw std::invalid_argument("need at least one agent and one alternative");
  }
  const std::size_t dim = agent_points.front().size();
  for (const auto* group : {&agent_points, &alternative_points}) {
    for (const auto& p : *group) {
      if (p.size() != dim) throw std::invalid_argument("points have mixed dimensions");
    }
  }
  const std::size_t n = agent_points.size(), m = alternative_points.size();
  CostMatrix d(n, m);
  std::vector<Ranking> rankings;
  for (Agent v = 0; v < n; ++v) {
    std::vector<double> raw(m);
    for (Alternative c = 0; c < m; ++c) {
      double sq = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double diff = agent_points[v][i] - alternative_points[c][i];
        sq += diff * diff;
      }
      raw[c] = sq;
      d.at(v, c) = padded_distance(sq);
    }
    std::vector<Alternative> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Alternative a, Alternative b) { return raw[a] < raw[b]; });
    rankings.emplace_back(std::move(order));
  }
  return {Profile(m, std::move(rankings)), std::move(d)};
}

Instance euclidean_instance(const EuclideanConfig& config) {
  if (config.dimension == 0) throw std::invalid_argument("dimension must be at least 1");
  if (!(config.low < config.high)) throw std::invalid_argument("empty coordinate range");
  Rng rng(config.seed);
  auto sample = [&] {
    std::vector<double> p(config.dimension);
    for (double& x : p) x = config.low + (config.high - config.low) * rng.unit();
    return p;
  };
  std::vector<std::vector<double>> agents, alternatives;
  for (std::size_t v = 0; v < config.agents; ++v) agents.push_back(sample());
  for (std::size_t c = 0; c < config.alternatives; ++c) alternatives.push_back(sample());
  return instance_from_points(agents, alternatives);
}

Profile random_profile(std::size_t agents, std::size_t alternatives, Rng& rng) {
  std::vector<Ranking> rankings;
  for (std::size_t v = 0; v < agents; ++v) {
    std::vector<Alternative> order(alternatives);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = alternatives; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    rankings.emplace_back(std::move(order));
  }
  return Profile(alternatives, std::move(rankings));
}

std::vector<std::pair<std::string, Profile>> micro_suite() {
  std::vector<std::pair<std::string, Profile>> out;
  const std::vector<std::vector<Alternative>> orders2{{0, 1}, {1, 0}};
  out.emplace_back("N1-m1", Profile(1, {Ranking({0})}));
  out.emplace_back("N2-m1", Profile(1, {Ranking({0}), Ranking({0})}));
  for (std::size_t a = 0; a < 2; ++a) {
    out.emplace_back("N1-m2-" + std::to_string(a), Profile(2, {Ranking(orders2[a])}));
  }
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      out.emplace_back("N2-m2-" + std::to_string(a) + std::to_string(b),
                       Profile(2, {Ranking(orders2[a]), Ranking(orders2[b])}));
    }
  }
  out.emplace_back("line-N2", line_family(2).profile);
  out.emplace_back("line-N3", line_family(3).profile);
  return out;
}

}  // namespace metricfair
