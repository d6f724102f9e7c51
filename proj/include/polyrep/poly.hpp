#pragma once

// Sparse multivariate polynomials over an exact or floating scalar.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polyrep/numeric.hpp"

namespace polyrep {

/// Exponent vector of a monomial x_1^e_1 ... x_d^e_d.
struct Monomial {
  std::vector<int> exponents;

  int degree() const {
    int total = 0;
    for (int e : exponents) total += e;
    return total;
  }
  std::size_t dim() const { return exponents.size(); }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded order: lower total degree first; within one degree,
/// lexicographically larger exponent vectors first (x1^2 before x1 x2 before x2^2).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return a.exponents > b.exponents;
  }
};

class ExpansionTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Affine function constant + linear . x.
template <typename Scalar>
struct AffineForm {
  Vector<Scalar> linear;
  Scalar constant{0};

  Eigen::Index dim() const { return linear.size(); }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    Scalar value = constant;
    for (Eigen::Index i = 0; i < linear.size(); ++i) value += linear(i) * Scalar(x(i));
    return value;
  }
};

/// Polynomial as a map from monomial to nonzero coefficient.
template <typename Scalar>
class SparsePoly {
 public:
  using Terms = std::map<Monomial, Scalar, GradedLexLess>;

  SparsePoly() = default;
  explicit SparsePoly(std::size_t dim) : dim_(dim) {}

  static SparsePoly constant(std::size_t dim, const Scalar& value) {
    SparsePoly p(dim);
    p.add_term(Monomial{std::vector<int>(dim, 0)}, value);
    return p;
  }

  static SparsePoly from_affine(const AffineForm<Scalar>& form) {
    const auto dim = static_cast<std::size_t>(form.dim());
    SparsePoly p = constant(dim, form.constant);
    for (std::size_t i = 0; i < dim; ++i) {
      Monomial mono{std::vector<int>(dim, 0)};
      mono.exponents[i] = 1;
      p.add_term(mono, form.linear(static_cast<Eigen::Index>(i)));
    }
    return p;
  }

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int result = -1;
    for (const auto& [mono, coef] : terms_) result = std::max(result, mono.degree());
    return result;
  }

  Scalar coefficient(const Monomial& mono) const {
    const auto it = terms_.find(mono);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Monomial& mono, const Scalar& coef) {
    if (mono.dim() != dim_) throw std::invalid_argument("monomial dimension mismatch");
    if (coef == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(mono, coef);
    if (!inserted) {
      it->second += coef;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  SparsePoly& operator+=(const SparsePoly& other) {
    check_dim(other);
    for (const auto& [mono, coef] : other.terms_) add_term(mono, coef);
    return *this;
  }

  SparsePoly& operator-=(const SparsePoly& other) {
    check_dim(other);
    for (const auto& [mono, coef] : other.terms_) add_term(mono, Scalar(-coef));
    return *this;
  }

  SparsePoly& operator*=(const Scalar& factor) {
    if (factor == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [mono, coef] : terms_) coef *= factor;
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(SparsePoly a, const Scalar& s) { return a *= s; }
  friend SparsePoly operator*(const Scalar& s, SparsePoly a) { return a *= s; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    a.check_dim(b);
    SparsePoly result(a.dim_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial mono{ma.exponents};
        for (std::size_t i = 0; i < mono.exponents.size(); ++i) mono.exponents[i] += mb.exponents[i];
        result.add_term(mono, ca * cb);
      }
    }
    return result;
  }

 private:
  void check_dim(const SparsePoly& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  }

  std::size_t dim_ = 0;
  Terms terms_;
};

/// Value of a polynomial at x. The double path uses compensated summation.
template <typename Derived>
double poly_eval(const SparsePoly<double>& p, const Eigen::MatrixBase<Derived>& x) {
  if (static_cast<std::size_t>(x.size()) != p.dim()) throw std::invalid_argument("point dimension mismatch");
  CompensatedSum sum;
  for (const auto& [mono, coef] : p.terms()) {
    double term = coef;
    for (std::size_t i = 0; i < mono.exponents.size(); ++i) {
      for (int e = 0; e < mono.exponents[i]; ++e) term *= x(static_cast<Eigen::Index>(i));
    }
    sum.add(term);
  }
  return sum.value();
}

template <typename Derived>
Rational poly_eval(const SparsePoly<Rational>& p, const Eigen::MatrixBase<Derived>& x) {
  if (static_cast<std::size_t>(x.size()) != p.dim()) throw std::invalid_argument("point dimension mismatch");
  Rational sum = 0;
  for (const auto& [mono, coef] : p.terms()) {
    Rational term = coef;
    for (std::size_t i = 0; i < mono.exponents.size(); ++i) {
      for (int e = 0; e < mono.exponents[i]; ++e) term *= Rational(x(static_cast<Eigen::Index>(i)));
    }
    sum += term;
  }
  return sum;
}

/// Coefficient-wise comparison: max |p_a - q_a| <= tol (tol = 0 means exact equality).
template <typename Scalar>
bool poly_equal(const SparsePoly<Scalar>& p, const SparsePoly<Scalar>& q, double tol = 0.0) {
  if (p.dim() != q.dim()) return false;
  const SparsePoly<Scalar> diff = p - q;
  if (tol == 0.0) return diff.is_zero();
  for (const auto& [mono, coef] : diff.terms()) {
    if (std::abs(to_double(coef)) > tol) return false;
  }
  return true;
}

/// Upper bound on the number of monomials of degree <= degree in dim variables.
double monomial_count_bound(std::size_t dim, int degree);

/// sigma_1(q_1(x),...,q_m(x)) .. sigma_max_level(...) fully expanded, from one pass
/// of the prepend recurrence over polynomials. Entry l of the result is sigma_l.
template <typename Scalar>
std::vector<SparsePoly<Scalar>> expand_sigma_all(const std::vector<AffineForm<Scalar>>& forms, int max_level,
                                                 double term_cap = 1e6) {
  if (forms.empty()) throw std::invalid_argument("expand_sigma_all: no forms");
  const int m = static_cast<int>(forms.size());
  if (max_level < 1 || max_level > m) throw std::invalid_argument("expand_sigma_all: level out of range");
  const auto dim = static_cast<std::size_t>(forms.front().dim());
  if (monomial_count_bound(dim, max_level) > term_cap) {
    throw ExpansionTooLarge("expansion of sigma_" + std::to_string(max_level) + " in " + std::to_string(dim) +
                            " variables exceeds the term cap");
  }
  std::vector<SparsePoly<Scalar>> sigma(static_cast<std::size_t>(max_level) + 1, SparsePoly<Scalar>(dim));
  sigma[0] = SparsePoly<Scalar>::constant(dim, Scalar(1));
  for (int j = 0; j < m; ++j) {
    const SparsePoly<Scalar> q = SparsePoly<Scalar>::from_affine(forms[static_cast<std::size_t>(j)]);
    for (int l = std::min(j + 1, max_level); l >= 1; --l) {
      sigma[static_cast<std::size_t>(l)] += q * sigma[static_cast<std::size_t>(l - 1)];
    }
  }
  return sigma;
}

template <typename Scalar>
SparsePoly<Scalar> expand_sigma_composition(const std::vector<AffineForm<Scalar>>& forms, int level,
                                            double term_cap = 1e6) {
  auto all = expand_sigma_all(forms, level, term_cap);
  return std::move(all[static_cast<std::size_t>(level)]);
}

}  // namespace polyrep
