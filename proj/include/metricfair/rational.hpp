#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace metricfair {

/// Exact arbitrary-precision rational. All costs, LP data and reported ratios use it.
using Rational = mpq_class;

/// Parses an integer, a fraction "p/q", or a plain decimal such as "-0.25".
/// Throws std::invalid_argument on anything else (including q = 0).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the value is an integer.
std::string to_string(const Rational& value);

/// Fixed-point decimal rounded half away from zero.
std::string to_decimal(const Rational& value, int digits);

/// base^exponent as an exact integer.
Rational integer_power(unsigned long base, unsigned long exponent);

/// Nearest double (may round).
double to_double(const Rational& value);

/// A nonnegative quotient that may be +infinity.
///
/// Ratios of social costs are x/y with x, y >= 0. The conventions are
/// x/0 = +infinity for x > 0 and 0/0 = 1; `divide` reports when the latter
/// applied so callers can flag degenerate metrics.
class Ratio {
 public:
  Ratio() = default;
  Ratio(Rational value) : value_(std::move(value)) {}  // NOLINT: implicit by intent

  static Ratio infinity();
  static Ratio divide(const Rational& numerator, const Rational& denominator,
                      bool* degenerate = nullptr);

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws std::logic_error when infinite.
  const Rational& value() const;

  /// "inf" or the exact fraction.
  std::string str() const;
  /// "inf" or a decimal with `digits` places.
  std::string decimal(int digits) const;
  double approx() const;

  friend bool operator==(const Ratio& a, const Ratio& b);
  friend bool operator<(const Ratio& a, const Ratio& b);
  friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }
  friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

}  // namespace metricfair
