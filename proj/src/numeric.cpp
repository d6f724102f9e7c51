#include "polyrep/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace polyrep {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Rational pow10(long exponent) {
  Rational result = 1;
  const Rational ten = 10;
  for (long i = 0; i < std::abs(exponent); ++i) result *= ten;
  return exponent < 0 ? Rational(1) / result : result;
}

// Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw std::invalid_argument("malformed exponent in number '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  // a leading zero would select octal parsing
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  Rational value{boost::multiprecision::mpz_int(digits)};
  value *= pow10(exponent);
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(trim(s.substr(0, slash)));
    const Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(s);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number");
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(result.ptr - buffer)));
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace polyrep
