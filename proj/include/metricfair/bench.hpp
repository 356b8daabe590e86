#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metricfair/generators.hpp"
#include "metricfair/lp.hpp"
#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

enum class Verdict { Pass, Fail, Report };
const char* to_string(Verdict verdict);

/// One checked instance: the measured quantities and whether the asserted
/// inequality held.
struct TheoremReport {
  std::string suite;
  std::string instance;
  std::size_t agents = 0;
  std::size_t alternatives = 0;
  std::size_t ell = 1;
  std::optional<Ratio> distortion;
  std::optional<Ratio> fairness;
  std::string bound;   ///< what was asserted, e.g. "fairness-distortion<2"
  Verdict verdict = Verdict::Pass;
  std::string note;

  // Kept so a failure can be replayed: the profile and the worst witness found.
  std::optional<Profile> profile;
  std::optional<CostMatrix> witness;
  std::vector<std::string> witness_paths;
};

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 1;
  std::size_t count = 0;  ///< 0: the suite's default
  std::size_t jobs = 1;
  lp::Mode mode = lp::Mode::Rational;
  std::filesystem::path witness_dir = "witnesses";
};

struct SuiteResult {
  std::vector<TheoremReport> rows;
  std::size_t failures = 0;
};

/// dist-le-fair, gap-below-two, gap-tightness, floor3, copeland5,
/// recursive-copeland, scoring-trends.
const std::vector<std::string>& suite_ids();

/// Runs a suite; rows come back in instance order whatever the job count.
/// Failing rows get their profile and witness written under witness_dir.
/// Throws std::invalid_argument for an unknown suite id.
SuiteResult run_suite(const SuiteConfig& config);

/// Random profile number `index` of a seeded corpus, with N and m drawn
/// uniformly from the given ranges.
Profile corpus_profile(std::uint64_t seed, std::size_t index, std::size_t min_agents,
                       std::size_t max_agents, std::size_t min_alternatives,
                       std::size_t max_alternatives);

/// suite,instance,N,m,l,distortion,fairness,gap,bound,verdict
std::string csv_header();
std::string csv_row(const TheoremReport& report, int decimal_digits = -1);

/// fairness - distortion, "inf" when only fairness is infinite, "-" when undefined.
std::string render_gap(const std::optional<Ratio>& distortion, const std::optional<Ratio>& fairness,
                       int decimal_digits = -1);

/// Runs body(i) for i in [0, count) on `jobs` threads. The first exception
/// (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace metricfair
