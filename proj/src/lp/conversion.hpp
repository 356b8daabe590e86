#pragma once

#include <optional>
#include <vector>

#include "metricfair/lp.hpp"

namespace metricfair::lp::detail {

struct Bounds {
  std::vector<Rational> lower;
  std::vector<std::optional<Rational>> upper;
};

/// A program rewritten as max c.x, A x <= b, x >= 0. Variables whose bounds
/// coincide are substituted out.
struct Conversion {
  StandardForm form;
  std::vector<std::optional<std::size_t>> column_of;  // var -> column
  std::vector<Rational> shift;                        // var = shift + column value
  Rational offset;                                    // objective constant
  bool minimize = false;
  bool bounds_conflict = false;                       // some lower > upper
};

Bounds bounds_of(const LinearProgram& lp);
Conversion convert(const LinearProgram& lp, const Bounds& bounds);

/// Maps a standard-form result back to the original variables.
Solution recover(const LinearProgram& lp, const Conversion& conv, const StandardResult& result);

StandardResult dispatch(const StandardForm& form, Mode mode);

}  // namespace metricfair::lp::detail
