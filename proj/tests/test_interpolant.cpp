#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace polyrep {
namespace {

using testing::cube;
using testing::tetrahedron;

VectorXd random_point(std::mt19937_64& rng, const Polytope& p, double pad) {
  const VectorXd lo = p.vertices.colwise().minCoeff().transpose();
  const VectorXd hi = p.vertices.colwise().maxCoeff().transpose();
  VectorXd x(p.dim);
  for (int i = 0; i < p.dim; ++i) {
    x(i) = std::uniform_real_distribution<double>(lo(i) - pad * p.diameter, hi(i) + pad * p.diameter)(rng);
  }
  return x;
}

TEST(AssembleA, UnitDiagonal) {
  for (const auto& [name, p] : testing::simple_zoo()) {
    const FacetForms forms = facet_forms(p);
    for (std::int64_t k : {1, 2, 5, 40}) {
      const MatrixXd a = assemble_A(p, forms, k);
      for (int v = 0; v < p.num_vertices(); ++v) EXPECT_EQ(a(v, v), 1.0) << name;
      EXPECT_GE(a.minCoeff(), 0.0) << name;
    }
  }
}

TEST(AssembleA, ConvergesToIdentity) {
  const Polytope p = cube();
  const FacetForms forms = facet_forms(p);
  double previous = 1e300;
  for (std::int64_t k : {1, 2, 4, 8, 16, 32, 64}) {
    const double dev = deviation_from_identity(assemble_A(p, forms, k));
    EXPECT_LT(dev, previous);
    previous = dev;
  }
  EXPECT_LT(previous, 1e-12);
}

TEST(AssembleA, CubeDeviationAtTheBoundK) {
  const Polytope p = cube();
  EXPECT_LE(deviation_from_identity(assemble_A(p, facet_forms(p), testing::cone_k(p))), 0.25);
  EXPECT_LE(deviation_from_identity(assemble_A(p, facet_forms(p), testing::full_k(p))), 0.25);
  // the vertex bound alone gives n (3/4)^{2k} <= 1/4 whenever gamma <= 3/4
  EXPECT_LE(8 * std::pow(0.75, 2 * 10), 0.25);
}

TEST(SolveWeights, IdentityGivesOnes) {
  EXPECT_EQ(solve_weights(MatrixXd::Identity(5, 5)), VectorXd::Ones(5));
}

TEST(SolveWeights, NeumannSanityBound) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) b(i, j) = i == j ? 0.0 : u(rng);
      b.row(i) *= 0.9 / b.row(i).sum();
    }
    const MatrixXd a = MatrixXd::Identity(n, n) + b;
    EXPECT_NEAR(deviation_from_identity(a), 0.9, 1e-12);
    const VectorXd y = solve_weights(a);
    EXPECT_GE(y.minCoeff(), 1.0 / 19.0);
    EXPECT_LE(y.maxCoeff(), 10.0);
    EXPECT_LE((a * y - VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SolveWeights, Failures) {
  try {
    solve_weights(MatrixXd::Ones(3, 3));
    FAIL();
  } catch (const InterpolantError& e) {
    EXPECT_EQ(e.kind(), InterpolantErrorKind::SingularMatrix);
  }
  MatrixXd a = MatrixXd::Identity(2, 2);
  a(0, 1) = 2.0;  // y = (-1, 1)
  try {
    solve_weights(a);
    FAIL();
  } catch (const InterpolantError& e) {
    EXPECT_EQ(e.kind(), InterpolantErrorKind::NotAccepted);
  }
}

TEST(InterpolantParams, CarriesLambdasAndDeviation) {
  const Polytope p = tetrahedron();
  const FacetForms forms = facet_forms(p);
  const InterpolantParams params = interpolant_params(p, forms, 3);
  EXPECT_EQ(params.k, 3);
  EXPECT_EQ(params.y.size(), 4);
  EXPECT_EQ(params.lambdas, form_scalings(p));
  EXPECT_EQ(params.aDeviation, deviation_from_identity(assemble_A(p, forms, 3)));
}

TEST(EvalFk, OneAtVertices) {
  for (const auto& [name, p] : testing::simple_zoo()) {
    const FacetForms forms = facet_forms(p);
    for (std::int64_t k : {testing::cone_k(p), testing::full_k(p)}) {
      const InterpolantParams params = interpolant_params(p, forms, k);
      for (int v = 0; v < p.num_vertices(); ++v) EXPECT_NEAR(eval_f_k(p, forms, params, p.vertex(v)), 1.0, 1e-9) << name;
    }
  }
}

TEST(EvalFk, CentroidBelowAndFarPointAbove) {
  const Polytope p = cube();
  const FacetForms forms = facet_forms(p);
  const InterpolantParams params = interpolant_params(p, forms, testing::cone_k(p));
  EXPECT_LT(eval_f_k(p, forms, params, VectorXd::Zero(3)), 1.0);
  EXPECT_GT(eval_f_k(p, forms, params, VectorXd{{3.0, 0.0, 0.0}}), 1.0);
}

TEST(EvalFk, LogDomainMatchesDirectPowers) {
  const Polytope p = tetrahedron();
  const FacetForms forms = facet_forms(p);
  const std::int64_t k = 3;
  const InterpolantParams params = interpolant_params(p, forms, k);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = random_point(rng, p, 0.2);
    const VectorXd q = forms.values(x);
    double direct = 0.0;
    for (int v = 0; v < p.num_vertices(); ++v) {
      double inner = 0.0;
      for (int f : p.incidence[static_cast<std::size_t>(v)]) inner += std::pow(1.0 - q(f), 2 * k);
      inner /= static_cast<double>(p.incidence[static_cast<std::size_t>(v)].size());
      direct += params.y(v) * std::pow(inner, 2 * k);
    }
    EXPECT_NEAR(eval_f_k(p, forms, params, x), direct, 1e-12 * direct);
  }
}

TEST(GradFk, MatchesCentralDifferences) {
  std::mt19937_64 rng(1);
  for (const auto& [name, p] : testing::simple_zoo()) {
    const FacetForms forms = facet_forms(p);
    for (std::int64_t k : {std::int64_t{2}, testing::cone_k(p)}) {
      const InterpolantParams params = interpolant_params(p, forms, k);
      const auto f = [&](const VectorXd& x) { return eval_f_k(p, forms, params, x); };
      int checked = 0;
      for (int trial = 0; trial < 100000 && checked < 100; ++trial) {
        const VectorXd x = random_point(rng, p, 0.05);
        // f_k overflows doubles a short distance outside P at large k
        if (!std::isfinite(f(x)) || f(x) > 1e250) continue;
        const VectorXd g = grad_f_k(p, forms, params, x);
        const VectorXd fd = testing::central_difference(f, x, 1e-6);
        // gradients below the rounding floor of the differences are skipped
        if (g.norm() < 1e-6 * f(x)) continue;
        EXPECT_LE((g - fd).norm(), 1e-5 * g.norm()) << name << " k = " << k;
        ++checked;
      }
      EXPECT_EQ(checked, 100) << name;
    }
  }
}

TEST(GradFk, ZeroAtCubeCenter) {
  const Polytope p = cube();
  const FacetForms forms = facet_forms(p);
  const InterpolantParams params = interpolant_params(p, forms, 5);
  EXPECT_LE(grad_f_k(p, forms, params, VectorXd::Zero(3)).norm(), 1e-15);
}

TEST(GradFk, PositiveAlongVertexCones) {
  const Polytope p = cube();
  const FacetForms forms = facet_forms(p);
  const InterpolantParams params = interpolant_params(p, forms, testing::cone_k(p));
  const VertexInterpolant f(p, forms, params.k, params.y);
  for (int v = 0; v < p.num_vertices(); ++v) {
    const VectorXd g = f.gradient(p.vertex(v));
    const VectorXd outward = p.vertex(v).normalized();
    EXPECT_GT(g.dot(outward), 0.0);
  }
}

TEST(FkConvexity, MidpointInequality) {
  std::mt19937_64 rng(2);
  for (const Polytope& p : {cube(), tetrahedron(), testing::ngon(5)}) {
    const FacetForms forms = facet_forms(p);
    const VertexInterpolant f(p, forms, 3, interpolant_params(p, forms, 3).y);
    for (int trial = 0; trial < 10000; ++trial) {
      const VectorXd x = random_point(rng, p, 0.1);
      const VectorXd y = random_point(rng, p, 0.1);
      EXPECT_LE(f.value(0.5 * (x + y)), 0.5 * (f.value(x) + f.value(y)) * (1 + 1e-12));
    }
  }
}

TEST(EpsilonParams, Cube) {
  const Polytope p = cube();
  const MetricParams mp = metric_params(p, facet_forms(p));
  const EpsilonParams eps = epsilon_params(mp, 6, 3);
  const double slack = 1.0 / std::sqrt(3.0);  // 1 - gamma
  EXPECT_NEAR(eps.eps1_power_bound, std::pow(slack / 16.0, 3), 1e-18);
  EXPECT_NEAR(eps.eps1_alpha_bound, slack / (8.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(eps.eps1, 4.698e-5, 1e-8);
  EXPECT_NEAR(eps.eps2_remainder_bound, 5.0 * std::pow(slack, 3) / (18.0 * 3 * 8 * 19), 1e-15);
  EXPECT_EQ(eps.eps2, eps.eps1);
  EXPECT_NEAR(eps.eps3_divisor, 2.0 + 12.0 * std::pow(8.0 / slack, 3), 1e-8);
  EXPECT_NEAR(eps.eps3 / 1.4716e-9, 1.0, 1e-4);
  EXPECT_NEAR(eps.delta, slack / 4.0 - eps.eps1 * std::sqrt(3.0), 1e-15);
}

TEST(EpsilonParams, OrderingOnTheZoo) {
  for (const auto& [name, p] : testing::simple_zoo()) {
    const MetricParams mp = metric_params(p, facet_forms(p));
    const EpsilonParams eps = epsilon_params(mp, p.num_facets(), p.dim);
    EXPECT_GT(eps.eps3, 0.0) << name;
    EXPECT_LE(eps.eps3, eps.eps2) << name;
    EXPECT_LE(eps.eps2, eps.eps1) << name;
    EXPECT_GT(eps.delta, 0.0) << name;
  }
}

TEST(EpsilonParams, NeedsMoreFacetsThanDimensions) {
  EXPECT_THROW(epsilon_params(MetricParams{0.5, 1.0, 1.0, 3}, 3, 3), std::invalid_argument);
}

TEST(QuantitativeK, Cube) {
  const Polytope p = cube();
  const MetricParams mp = metric_params(p, facet_forms(p));
  const EpsilonParams eps = epsilon_params(mp, 6, 3);
  const KBounds kb = quantitative_k(mp, 8, 3, eps.eps3);
  ASSERT_TRUE(kb.gamma_bound);
  EXPECT_NEAR(*kb.gamma_bound, 1.0 / (2.0 * std::log2(std::sqrt(3.0) / (std::sqrt(3.0) - 1.0))), 1e-12);
  EXPECT_EQ(std::ceil(*kb.gamma_bound), 1.0);
  EXPECT_NEAR(kb.vertex_bound, 10.0, 1e-12);
  EXPECT_NEAR(kb.cone_bound, 3.0 * std::log2(288.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_EQ(std::ceil(kb.cone_bound), 27.0);
  ASSERT_TRUE(kb.eps_bound);
  // 1 + eps3 rounds in the naive form, so compare relatively
  EXPECT_NEAR(*kb.eps_bound / (std::log2(6.0) / (2.0 * std::log2(1.0 + eps.eps3))), 1.0, 1e-6);
  EXPECT_NEAR(*kb.eps_bound, std::log2(6.0) * std::log(2.0) / (2.0 * std::log1p(eps.eps3)), 1e-6);
  EXPECT_EQ(kb.binding, 2);
  EXPECT_EQ(kb.k, static_cast<std::int64_t>(std::ceil(*kb.eps_bound)));
  EXPECT_EQ(quantitative_k(mp, 8, 3, std::nullopt).k, 27);
}

TEST(QuantitativeK, SaturatesBeyondDoublePrecision) {
  const KBounds kb = quantitative_k(MetricParams{0.5, 1.0, 1.0, 2}, 4, 2, 1e-30);
  EXPECT_TRUE(kb.saturated);
  EXPECT_EQ(kb.k, kMaxRepresentableK);
  EXPECT_FALSE(quantitative_k(MetricParams{0.5, 1.0, 1.0, 2}, 4, 2, 1e-3).saturated);
}

TEST(QuantitativeK, GammaZeroSkipsItsBound) {
  const KBounds kb = quantitative_k(MetricParams{0.0, 1.0, 1.0, 2}, 3, 2, std::nullopt);
  EXPECT_FALSE(kb.gamma_bound);
  EXPECT_FALSE(kb.eps_bound);
  EXPECT_THROW(quantitative_k(MetricParams{0.5, 1.0, 1.0, 2}, 3, 2, 0.0), std::invalid_argument);
}

TEST(QuantitativeK, WeightBoundsAtTheBoundK) {
  for (const auto& [name, p] : testing::simple_zoo()) {
    const InterpolantParams params = interpolant_params(p, facet_forms(p), testing::cone_k(p));
    EXPECT_LE(params.aDeviation, 0.25) << name;
    EXPECT_GE(params.y.minCoeff(), 2.0 / 3.0) << name;
    EXPECT_LE(params.y.maxCoeff(), 4.0 / 3.0) << name;
  }
}

TEST(FindK, ZeroKMaxExhausts) {
  const Polytope p = cube();
  KSearchOptions options;
  options.k_max = 0;
  try {
    find_k(p, facet_forms(p), [](const auto&, const auto&) { return true; }, options);
    FAIL();
  } catch (const InterpolantError& e) {
    EXPECT_EQ(e.kind(), InterpolantErrorKind::ExhaustedKMax);
  }
}

TEST(FindK, SearchSkipsUnacceptedK) {
  const Polytope p = cube();
  KSearchOptions options;
  options.k_max = 100;
  const auto result = find_k(p, facet_forms(p), [](const VertexInterpolant& f, const auto&) { return f.k() >= 4; }, options);
  EXPECT_EQ(result.params.k, 4);
  EXPECT_EQ(result.attempts, 4);
}

TEST(FindK, SquareWithSamplingVerifier) {
  const Polytope p = testing::square();
  const FacetForms forms = facet_forms(p);
  const auto verifier = [&](const VertexInterpolant&, const InterpolantParams& params) {
    const PolyRepresentation rep = build_representation(p, forms, params);
    return verify_membership(rep, p, MembershipOptions{}).accepted();
  };
  KSearchOptions options;
  options.k_max = 2 * testing::full_k(p);
  const KSearchResult result = find_k(p, forms, verifier, options);
  EXPECT_LE(result.params.k, testing::full_k(p));
  EXPECT_EQ(build_representation(p, forms, result.params).size(), 2u);
}

TEST(FindK, DirectAndFixedPolicies) {
  const Polytope p = tetrahedron();
  const FacetForms forms = facet_forms(p);
  const auto always = [](const auto&, const auto&) { return true; };
  KSearchOptions direct;
  direct.policy = KPolicy::Direct;
  EXPECT_EQ(find_k(p, forms, always, direct).params.k, testing::full_k(p));
  direct.eps = 0.01;
  const MetricParams mp = metric_params(p, forms);
  EXPECT_EQ(find_k(p, forms, always, direct).params.k, quantitative_k(mp, 4, 3, 0.01).k);

  KSearchOptions fixed;
  fixed.policy = KPolicy::Fixed;
  fixed.fixed_k = 7;
  EXPECT_EQ(find_k(p, forms, always, fixed).params.k, 7);
  const Polytope c = cube();
  fixed.fixed_k = 1;  // A_1 of the cube is singular
  EXPECT_THROW(find_k(c, facet_forms(c), always, fixed), InterpolantError);
}

TEST(Sandwich, MonotoneContainmentBeyondTheBound) {
  for (const Polytope& p : {cube(), tetrahedron(), testing::ngon(6)}) {
    const FacetForms forms = facet_forms(p);
    const double eps = 0.01;
    const std::int64_t k = quantitative_k(metric_params(p, forms), p.num_vertices(), p.dim, eps).k;
    for (std::int64_t kk : {k, 2 * k, 5 * k}) {
      const PolyRepresentation rep = build_representation(p, forms, interpolant_params(p, forms, kk));
      const VerificationReport report = verify_sandwich(rep, p, eps, 20000, 4);
      EXPECT_TRUE(report.accepted()) << "k = " << kk;
    }
  }
}

}  // namespace
}  // namespace polyrep
