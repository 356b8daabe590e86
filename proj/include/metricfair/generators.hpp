#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

/// Seeded generator with platform-independent derived draws (the standard
/// distributions are implementation-defined, so they are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer over (base, index): independent per-instance seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct Instance {
  Profile profile;
  CostMatrix costs;
};

/// Two alternatives on a path metric. Agent 0 ranks c2 above c1, the other
/// N-1 agents rank c1 above c2.
/// d(0,c2) = 1, d(0,c1) = 3 - delta, d(v,c1) = 1 - delta, d(v,c2) = 1.
/// Alternative 0 is c1. Throws std::invalid_argument unless N >= 2, 0 <= delta < 1.
Instance line_family(std::size_t agents, const Rational& delta = Rational(0));

/// Cost 3 for agent v on every alternative it ranks below c_adv, 1 elsewhere.
/// Under it the k = 1 fairness ratio of c is exactly 3.
/// Throws std::invalid_argument unless v ranks c_adv above c.
CostMatrix floor_metric(const Profile& profile, Alternative c, Agent v, Alternative c_adv);

/// Alternatives reachable from c in the reachability graph cost 1 for every
/// agent, all others cost epsilon. Consistent because no agent ranks a
/// reachable alternative above an unreachable one.
CostMatrix two_cluster_metric(const Profile& profile, Alternative c, const Rational& epsilon);

struct EuclideanConfig {
  std::size_t dimension = 2;
  double low = 0.0;
  double high = 1.0;
  std::uint64_t seed = 0;
  std::size_t agents = 3;
  std::size_t alternatives = 3;
};

/// Agents rank alternatives by increasing distance, ties to the lower index.
/// Distances are rounded up to a multiple of 2^-20 and then padded by 2^-20,
/// which keeps the quadrilateral inequality exact despite the rounding.
Instance instance_from_points(const std::vector<std::vector<double>>& agent_points,
                              const std::vector<std::vector<double>>& alternative_points);

/// Samples N + m points uniformly in [low, high]^dimension.
Instance euclidean_instance(const EuclideanConfig& config);

/// N uniformly random strict rankings over m alternatives.
Profile random_profile(std::size_t agents, std::size_t alternatives, Rng& rng);

/// Every profile with N <= 2 and m <= 2, then the line-family profiles for N = 2, 3.
std::vector<std::pair<std::string, Profile>> micro_suite();

}  // namespace metricfair
