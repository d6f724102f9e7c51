#pragma once

// The vertex-interpolating convex polynomial f_k and its parameters.
//
//   f_k(x) = sum_v y_v * ( (1/deg v) * sum_{F incident to v} (1 - q_F(x))^{2k} )^{2k}
//
// with weights y solving A_k y = 1 so that f_k equals one at every vertex.
// Everything is evaluated in the log domain: for the k values produced by
// the explicit bounds (up to ~1e9) the powers over- and underflow doubles.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyrep/polytope.hpp"

namespace polyrep {

enum class InterpolantErrorKind { SingularMatrix, NotAccepted, ExhaustedKMax, NonpositiveDelta };

class InterpolantError : public std::runtime_error {
 public:
  InterpolantError(InterpolantErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  InterpolantErrorKind kind() const { return kind_; }

 private:
  InterpolantErrorKind kind_;
};

struct InterpolantParams {
  std::int64_t k = 1;
  VectorXd y;               // per vertex, in Polytope vertex order
  double aDeviation = 0.0;  // |A_k - E|_inf
  VectorXd lambdas;         // lambda_j * raw_j = normalized q_j
};

struct EpsilonParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;
  double delta = 0.0;
  // individual bounds, for reporting
  double eps1_power_bound = 0.0;   // ((1-gamma)/(4(1+d)))^(m-d)
  double eps1_alpha_bound = 0.0;   // (1-gamma)/(2(1+d) sqrt(d) alpha)
  double eps2_remainder_bound = 0.0;  // 5(1-gamma)^(m-d) / (18 C(d,floor(d/2)) 2^(m-d) (3^(m-d)-2^(m-d)))
  double eps3_divisor = 0.0;
};

/// The four lower bounds on k (binary logarithms). Absent bounds are vacuous.
struct KBounds {
  std::optional<double> gamma_bound;  // 1 / (2 log(1/gamma)); absent when gamma = 0
  double vertex_bound = 0.0;          // 2 log(4n)
  std::optional<double> eps_bound;    // log(2 deg P) / (2 log(1+eps)); absent without eps
  double cone_bound = 0.0;            // 3 log(12 n sqrt(d) alpha deg P)
  std::int64_t k = 1;                 // ceil of the largest bound, at least 1
  int binding = 0;                    // 0 gamma, 1 vertex, 2 eps, 3 cone
  bool saturated = false;             // the bound exceeded kMaxRepresentableK and k was capped
};

/// Largest k handled: 2^53, beyond which k itself is not exact in double.
inline constexpr std::int64_t kMaxRepresentableK = std::int64_t{1} << 53;

/// Evaluator for f_k over a fixed polytope, normalized forms and weights.
class VertexInterpolant {
 public:
  VertexInterpolant(const Polytope& p, const FacetForms& forms, std::int64_t k, VectorXd weights);

  std::int64_t k() const { return k_; }
  const VectorXd& weights() const { return weights_; }
  int num_vertices() const { return static_cast<int>(incidence_.size()); }

  /// log f_k(x); -inf where f_k vanishes.
  double log_value(const Eigen::Ref<const VectorXd>& x) const;
  /// f_k(x); may be +inf far outside the polytope.
  double value(const Eigen::Ref<const VectorXd>& x) const;
  /// (1/4k^2) grad f_k(x)
  VectorXd scaled_gradient(const Eigen::Ref<const VectorXd>& x) const;
  VectorXd gradient(const Eigen::Ref<const VectorXd>& x) const;

  /// 2k * log( (1/deg v) sum_{F at v} |1 - q_F|^{2k} ) for the given form values.
  double log_vertex_kernel(int vertex, const Eigen::Ref<const VectorXd>& q) const;
  /// Form values at x, with values inside their rounding error snapped to zero.
  VectorXd form_values(const Eigen::Ref<const VectorXd>& x) const;

 private:
  std::int64_t k_;
  VectorXd weights_;
  MatrixXd linear_;  // m x d, rows are the linear parts of q_F
  VectorXd constant_;
  std::vector<std::vector<int>> incidence_;
};

/// A_k(w, v) = ((1/deg v) sum_{F at v} (1 - q_F(w))^{2k})^{2k}; unit diagonal.
MatrixXd assemble_A(const Polytope& p, const FacetForms& forms, std::int64_t k);

/// |A - E|_inf
double deviation_from_identity(const MatrixXd& a);

/// Solves A y = 1 by partial-pivot elimination. Throws SingularMatrix, or
/// NotAccepted when some weight is not positive.
VectorXd solve_weights(const MatrixXd& a);

/// assemble_A + solve_weights, packaged with the diagnostics.
InterpolantParams interpolant_params(const Polytope& p, const FacetForms& forms, std::int64_t k);

double eval_f_k(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                const Eigen::Ref<const VectorXd>& x);
VectorXd grad_f_k(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                  const Eigen::Ref<const VectorXd>& x);

EpsilonParams epsilon_params(const MetricParams& mp, int m, int d);

KBounds quantitative_k(const MetricParams& mp, int n, int d, std::optional<double> eps);

enum class KPolicy { Search, Direct, Fixed };

/// Acceptance check run on a candidate interpolant (the sampling verifier in practice).
using InterpolantVerifier = std::function<bool(const VertexInterpolant&, const InterpolantParams&)>;

struct KSearchOptions {
  KPolicy policy = KPolicy::Search;
  std::int64_t k_max = 0;          // search only; 0 exhausts immediately
  std::int64_t fixed_k = 1;        // fixed only
  std::optional<double> eps;       // direct: override of eps3 in the k bound
};

struct KSearchResult {
  InterpolantParams params;
  std::int64_t attempts = 0;
};

/// k <- 1, 2, ...: assemble A_k, solve, require positive weights, run the
/// verifier; the first k that passes is returned. Direct and fixed policies
/// validate a single k.
KSearchResult find_k(const Polytope& p, const FacetForms& forms, const InterpolantVerifier& verifier,
                     const KSearchOptions& options);

}  // namespace polyrep
