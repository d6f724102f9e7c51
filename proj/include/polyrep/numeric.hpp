#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace polyrep {

/// Exact rational scalar used by the coefficient oracles and the exact backend.
using Rational = boost::multiprecision::mpq_rational;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Parses "p/q", "-7", "0.125" or "1e-3" into an exact rational.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact rational value of a finite double, via its shortest round-trip
/// decimal form (so 0.1 becomes 1/10, not the binary expansion).
Rational rational_from_double(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

/// Exact binomial coefficient as a double (exact for the sizes used here).
double binomial(int n, int k);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log(sum(exp(values))) without overflow; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

}  // namespace polyrep
