#pragma once

// Elementary symmetric polynomials of a value vector.

#include <algorithm>
#include <cstddef>

#include "polyrep/numeric.hpp"

namespace polyrep {

/// All elementary symmetric values (sigma_0, ..., sigma_m) of `values`.
/// Uses the prepend recurrence sigma_l <- sigma_l + y * sigma_{l-1}
/// (descending l), which is exact for rational scalars.
template <typename Derived>
Vector<typename Derived::Scalar> elem_sym_all(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = values.size();
  Vector<Scalar> sigma = Vector<Scalar>::Zero(m + 1);
  sigma(0) = Scalar(1);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Scalar y = values(j);
    for (Eigen::Index l = j + 1; l >= 1; --l) sigma(l) += y * sigma(l - 1);
  }
  return sigma;
}

/// sigma_l with the conventions sigma_l = 0 for l < 0 and l > m.
template <typename Scalar>
Scalar sigma_at(const Vector<Scalar>& spectrum, Eigen::Index l) {
  if (l < 0 || l >= spectrum.size()) return Scalar(0);
  return spectrum(l);
}

/// Nonnegative-orthant test through the signs of sigma_1..sigma_d only.
template <typename Derived>
bool orthant_member_by_signs(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const auto sigma = elem_sym_all(values);
  for (Eigen::Index l = 1; l < sigma.size(); ++l) {
    if (sigma(l) < Scalar(0)) return false;
  }
  return true;
}

/// sigma_i of the concatenation [x, y], computed as
/// sum_j sigma_{i-j}(x) sigma_j(y) over the nonzero range of j.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar convolution_split(const Eigen::MatrixBase<DerivedX>& x,
                                            const Eigen::MatrixBase<DerivedY>& y, Eigen::Index i) {
  using Scalar = typename DerivedX::Scalar;
  const auto sx = elem_sym_all(x);
  const auto sy = elem_sym_all(y);
  const Eigen::Index n1 = x.size();
  const Eigen::Index n2 = y.size();
  Scalar total(0);
  for (Eigen::Index j = std::max<Eigen::Index>(0, i - n1); j <= std::min(n2, i); ++j) {
    total += sx(i - j) * sy(j);
  }
  return total;
}

}  // namespace polyrep
