#pragma once

// Fixtures and brute-force oracles shared by the test binaries.

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polyrep/interpolant.hpp"
#include "polyrep/polytope.hpp"
#include "polyrep/representation.hpp"

namespace polyrep::testing {

inline RawInequality inequality(std::vector<Rational> a, Rational b) {
  RawInequality r;
  r.a.resize(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r.a(static_cast<Eigen::Index>(i)) = a[i];
  r.b = b;
  return r;
}

inline RawInequality inequality_from_doubles(const VectorXd& a, double b) {
  RawInequality r;
  r.a.resize(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.a(i) = rational_from_double(a(i));
  r.b = rational_from_double(b);
  return r;
}

inline Polytope polytope(int dim, std::vector<RawInequality> rows) {
  return enumerate_vertices(hrep_from_raw(dim, std::move(rows)));
}

/// |x_i| <= 1, facets ordered x_1 <= 1, x_2 <= 1, x_3 <= 1, -x_1 <= 1, ...
inline Polytope cube() {
  return polytope(3, {inequality({1, 0, 0}, 1), inequality({0, 1, 0}, 1), inequality({0, 0, 1}, 1),
                      inequality({-1, 0, 0}, 1), inequality({0, -1, 0}, 1), inequality({0, 0, -1}, 1)});
}

/// Regular tetrahedron with raw forms 1+x1-x2+x3, 1-x1+x2+x3, 1+x1+x2-x3, 1-x1-x2-x3.
inline Polytope tetrahedron() {
  return polytope(3, {inequality({-1, 1, -1}, 1), inequality({1, -1, -1}, 1), inequality({-1, -1, 1}, 1),
                      inequality({1, 1, 1}, 1)});
}

inline Polytope square() {
  return polytope(2, {inequality({1, 0}, 1), inequality({0, 1}, 1), inequality({-1, 0}, 1), inequality({0, -1}, 1)});
}

/// Regular n-gon circumscribed about the unit circle.
inline Polytope ngon(int n) {
  std::vector<RawInequality> rows;
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * j / n + 0.1;
    rows.push_back(inequality_from_doubles(VectorXd{{std::cos(t), std::sin(t)}}, 1.0));
  }
  return polytope(2, std::move(rows));
}

/// Triangle x Triangle in R^4.
inline Polytope triangle_product() {
  return polytope(4, {inequality({-1, 0, 0, 0}, 0), inequality({0, -1, 0, 0}, 0), inequality({1, 1, 0, 0}, 1),
                      inequality({0, 0, -1, 0}, 0), inequality({0, 0, 0, -1}, 0), inequality({0, 0, 1, 1}, 1)});
}

/// Triangle x segment in R^3.
inline Polytope prism() {
  return polytope(3, {inequality({-1, 0, 0}, 0), inequality({0, -1, 0}, 0), inequality({1, 1, 0}, 1),
                      inequality({0, 0, 1}, 1), inequality({0, 0, -1}, 1)});
}

/// Cube with the corner (1,1,1) cut off by x1+x2+x3 <= 5/2.
inline Polytope truncated_cube() {
  return polytope(3, {inequality({1, 0, 0}, 1), inequality({0, 1, 0}, 1), inequality({0, 0, 1}, 1),
                      inequality({-1, 0, 0}, 1), inequality({0, -1, 0}, 1), inequality({0, 0, -1}, 1),
                      inequality({1, 1, 1}, Rational(5, 2))});
}

inline HRep pyramid_hrep() {
  return hrep_from_raw(3, {inequality({0, 0, -1}, 0), inequality({1, 0, 1}, 1), inequality({-1, 0, 1}, 1),
                           inequality({0, 1, 1}, 1), inequality({0, -1, 1}, 1)});
}

/// Intersection of m random tangent half-spaces of the unit sphere; retried
/// until bounded and simple.
inline Polytope random_simple(int dim, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<RawInequality> rows;
    for (int j = 0; j < m; ++j) {
      VectorXd u(dim);
      for (int i = 0; i < dim; ++i) u(i) = normal(rng);
      rows.push_back(inequality_from_doubles(u.normalized(), 1.0));
    }
    try {
      Polytope p = polytope(dim, std::move(rows));
      if (check_simple(p)) return p;
    } catch (const PolytopeError&) {
    }
  }
  throw std::runtime_error("no random simple polytope found");
}

struct NamedPolytope {
  std::string name;
  Polytope polytope;
};

/// Simple test polytopes in d = 2, 3, 4.
inline std::vector<NamedPolytope> simple_zoo() {
  return {{"cube", cube()},
          {"tetrahedron", tetrahedron()},
          {"square", square()},
          {"pentagon", ngon(5)},
          {"hexagon", ngon(6)},
          {"heptagon", ngon(7)},
          {"octagon", ngon(8)},
          {"prism", prism()},
          {"truncated_cube", truncated_cube()},
          {"triangle_product", triangle_product()},
          {"random3", random_simple(3, 7, 11)}};
}

// ---------------------------------------------------------------------------
// Oracles

/// sigma_l by summing over all l-subsets (m <= 12).
template <typename Scalar>
Scalar brute_sigma(const std::vector<Scalar>& values, int l) {
  const int m = static_cast<int>(values.size());
  if (m > 12) throw std::invalid_argument("brute_sigma is limited to m <= 12");
  if (l < 0 || l > m) return Scalar(0);
  Scalar total(0);
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != static_cast<unsigned>(l)) continue;
    Scalar product(1);
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) product *= values[static_cast<std::size_t>(j)];
    }
    total += product;
  }
  return total;
}

/// Facets of conv(points) by testing every hyperplane through d of them.
inline std::vector<std::pair<VectorXd, double>> brute_facets(const MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  std::vector<std::pair<VectorXd, double>> facets;
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::fill(mask.begin(), mask.begin() + d, true);
  do {
    MatrixXd a(d, d + 1);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      a.row(r).head(d) = points.row(i);
      a(r, d) = -1.0;
      ++r;
    }
    Eigen::FullPivLU<MatrixXd> lu(a);
    if (lu.dimensionOfKernel() != 1) continue;
    VectorXd h = lu.kernel().col(0);
    VectorXd u = h.head(d);
    double b = h(d);
    const double norm = u.norm();
    if (norm < 1e-12) continue;
    u /= norm;
    b /= norm;
    const VectorXd s = points * u - VectorXd::Constant(n, b);
    if (s.maxCoeff() > 1e-9) {
      if (s.minCoeff() < -1e-9) continue;
      u = -u;
      b = -b;
    }
    bool seen = false;
    for (const auto& [u2, b2] : facets) seen = seen || ((u2 - u).norm() < 1e-9 && std::abs(b2 - b) < 1e-9);
    if (!seen) facets.emplace_back(u, b);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return facets;
}

/// Central differences of f at x with step h.
inline VectorXd central_difference(const std::function<double(const VectorXd&)>& f, const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

/// Max over non-incident (F, v) of 1 - q_F(v), computed from the vertex list
/// and the normals directly.
inline double brute_gamma(const Polytope& p) {
  double diam = 0.0;
  for (int a = 0; a < p.num_vertices(); ++a) {
    for (int b = 0; b < p.num_vertices(); ++b) diam = std::max(diam, (p.vertex(a) - p.vertex(b)).norm());
  }
  double gamma = 0.0;
  for (const auto& facet : p.facets) {
    double h = -1e300;
    for (int v = 0; v < p.num_vertices(); ++v) h = std::max(h, facet.normal.dot(p.vertex(v)));
    for (int v = 0; v < p.num_vertices(); ++v) {
      const double q = (h - facet.normal.dot(p.vertex(v))) / diam;
      if (q > 1e-9) gamma = std::max(gamma, 1.0 - q);
    }
  }
  return gamma;
}

/// Weights and representation at a fixed k.
inline PolyRepresentation representation_at(const Polytope& p, std::int64_t k, FormMode mode = FormMode::Normalized) {
  const FacetForms forms = facet_forms(p, FormMode::Normalized);
  return build_representation(p, forms, interpolant_params(p, forms, k), mode);
}

/// Smallest k meeting the gamma, vertex and cone bounds.
inline std::int64_t cone_k(const Polytope& p) {
  const FacetForms forms = facet_forms(p, FormMode::Normalized);
  return quantitative_k(metric_params(p, forms), p.num_vertices(), p.dim, std::nullopt).k;
}

/// k from all four bounds with eps = eps3.
inline std::int64_t full_k(const Polytope& p) {
  const FacetForms forms = facet_forms(p, FormMode::Normalized);
  const MetricParams mp = metric_params(p, forms);
  return quantitative_k(mp, p.num_vertices(), p.dim, epsilon_params(mp, p.num_facets(), p.dim).eps3).k;
}

}  // namespace polyrep::testing
