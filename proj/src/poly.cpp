#include "polyrep/poly.hpp"

namespace polyrep {

double monomial_count_bound(std::size_t dim, int degree) {
  return binomial(static_cast<int>(dim) + degree, static_cast<int>(dim));
}

}  // namespace polyrep
