#include "metricfair/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace metricfair {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("not a rational number: '" + original + "'");
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator: '" + original + "'");
    result = Rational(mpz_class(std::string(num), 10), d);
    result.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("not a rational number: '" + original + "'");
    }
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Rational(mpz_class(digits, 10), scale);
    result.canonicalize();
  } else {
    if (!all_digits(s)) throw std::invalid_argument("not a rational number: '" + original + "'");
    result = Rational(mpz_class(std::string(s), 10));
  }
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(value) * scale;
  // round half away from zero
  mpz_class twice_num = 2 * scaled.get_num() + scaled.get_den();
  mpz_class rounded = twice_num / (2 * scaled.get_den());
  std::string body = rounded.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (value < 0 && rounded != 0) body.insert(0, "-");
  return body;
}

Rational integer_power(unsigned long base, unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), base, exponent);
  return Rational(result);
}

double to_double(const Rational& value) { return value.get_d(); }

Ratio Ratio::infinity() {
  Ratio r;
  r.infinite_ = true;
  return r;
}

Ratio Ratio::divide(const Rational& numerator, const Rational& denominator, bool* degenerate) {
  if (degenerate != nullptr) *degenerate = false;
  if (denominator == 0) {
    if (numerator == 0) {
      if (degenerate != nullptr) *degenerate = true;
      return Ratio(Rational(1));
    }
    return infinity();
  }
  return Ratio(Rational(numerator / denominator));
}

const Rational& Ratio::value() const {
  if (infinite_) throw std::logic_error("Ratio::value() called on an infinite ratio");
  return value_;
}

std::string Ratio::str() const { return infinite_ ? "inf" : to_string(value_); }

std::string Ratio::decimal(int digits) const {
  return infinite_ ? "inf" : to_decimal(value_, digits);
}

double Ratio::approx() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_.get_d();
}

bool operator==(const Ratio& a, const Ratio& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

bool operator<(const Ratio& a, const Ratio& b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  return a.value_ < b.value_;
}

}  // namespace metricfair
