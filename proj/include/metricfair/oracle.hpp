#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "metricfair/metric.hpp"
#include "metricfair/profile.hpp"
#include "metricfair/rational.hpp"

namespace metricfair {

struct GridSearchConfig {
  /// Ascending, nonnegative. The default is 1/4, 1/2, ..., 3.
  std::vector<Rational> grid = default_grid();
  std::uint64_t max_cells = 500'000'000;  ///< cap on grid^(N*m)
  std::size_t jobs = 1;

  static std::vector<Rational> default_grid();
  /// The default grid with 0 prepended, to reach optima on the boundary.
  static GridSearchConfig with_zero();
};

enum class OracleMode { Distortion, Fairness };

class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Ratio value{Rational(0)};
  std::optional<CostMatrix> witness;
  std::uint64_t metrics_examined = 0;  ///< consistent grid metrics evaluated
};

/// Largest fixed-metric ratio over every consistent cost matrix with entries
/// from the grid. Entries are searched agent by agent along each ranking, so
/// consistency and the quadrilateral rows prune partial assignments early.
/// Throws EnumerationCapError when grid^(N*m) exceeds max_cells, and
/// std::invalid_argument on a malformed grid.
OracleResult oracle_worst_ratio(const Profile& profile, const AlternativeSet& S, OracleMode mode,
                                const GridSearchConfig& config = {});

}  // namespace metricfair
