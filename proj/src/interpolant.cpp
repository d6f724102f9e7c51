#include "polyrep/interpolant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyrep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 2k * log|1 - q|, accurate for small q.
double log_power(double q, double two_k) {
  const double t = 1.0 - q;
  if (t == 0.0) return kNegInf;
  const double log_abs = std::abs(q) < 0.5 ? std::log1p(-q) : std::log(std::abs(t));
  return two_k * log_abs;
}

void require_normalized(const FacetForms& forms) {
  if (!forms.normalized) throw std::invalid_argument("the interpolant needs normalized facet forms");
}

}  // namespace

VertexInterpolant::VertexInterpolant(const Polytope& p, const FacetForms& forms, std::int64_t k, VectorXd weights)
    : k_(k), weights_(std::move(weights)), incidence_(p.incidence) {
  require_normalized(forms);
  if (k < 1) throw std::invalid_argument("k must be positive");
  const auto m = static_cast<Eigen::Index>(forms.size());
  linear_.resize(m, p.dim);
  constant_.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    linear_.row(j) = forms.forms[static_cast<std::size_t>(j)].linear.transpose();
    constant_(j) = forms.forms[static_cast<std::size_t>(j)].constant;
  }
}

VectorXd VertexInterpolant::form_values(const Eigen::Ref<const VectorXd>& x) const {
  constexpr double kSnap = 64 * std::numeric_limits<double>::epsilon();
  VectorXd q = constant_ + linear_ * x;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double scale = std::abs(constant_(j)) + (linear_.row(j).cwiseAbs() * x.cwiseAbs()).sum();
    if (std::abs(q(j)) <= kSnap * scale) q(j) = 0.0;
  }
  return q;
}

double VertexInterpolant::log_vertex_kernel(int vertex, const Eigen::Ref<const VectorXd>& q) const {
  const auto& inc = incidence_[static_cast<std::size_t>(vertex)];
  const double two_k = 2.0 * static_cast<double>(k_);
  std::vector<double> terms;
  terms.reserve(inc.size());
  for (int f : inc) terms.push_back(log_power(q(f), two_k));
  const double inner = log_sum_exp(terms) - std::log(static_cast<double>(inc.size()));
  return inner == kNegInf ? kNegInf : two_k * inner;
}

double VertexInterpolant::log_value(const Eigen::Ref<const VectorXd>& x) const {
  const VectorXd q = form_values(x);
  std::vector<double> terms(incidence_.size());
  for (int v = 0; v < num_vertices(); ++v) {
    terms[static_cast<std::size_t>(v)] = std::log(weights_(v)) + log_vertex_kernel(v, q);
  }
  return log_sum_exp(terms);
}

double VertexInterpolant::value(const Eigen::Ref<const VectorXd>& x) const { return std::exp(log_value(x)); }

VectorXd VertexInterpolant::scaled_gradient(const Eigen::Ref<const VectorXd>& x) const {
  const VectorXd q = form_values(x);
  const double two_k = 2.0 * static_cast<double>(k_);
  const auto dim = linear_.cols();

  // grad/(4k^2) = sum_v y_v inner_v^{2k-1} (1/deg v) sum_F (1-q_F)^{2k-1} (-l_F)
  std::vector<double> log_coef;
  std::vector<VectorXd> directions;
  for (int v = 0; v < num_vertices(); ++v) {
    const auto& inc = incidence_[static_cast<std::size_t>(v)];
    std::vector<double> powers;
    double peak = kNegInf;
    for (int f : inc) {
      const double lp = log_power(q(f), two_k - 1.0);
      powers.push_back(lp);
      peak = std::max(peak, lp);
    }
    if (peak == kNegInf) continue;
    VectorXd direction = VectorXd::Zero(dim);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      if (powers[i] == kNegInf) continue;
      const double sign = (1.0 - q(inc[i])) < 0.0 ? -1.0 : 1.0;
      direction -= sign * std::exp(powers[i] - peak) * linear_.row(inc[i]).transpose();
    }
    direction /= static_cast<double>(inc.size());
    const double inner = log_vertex_kernel(v, q) / two_k;  // log inner_v
    log_coef.push_back(std::log(weights_(v)) + (two_k - 1.0) * inner + peak);
    directions.push_back(std::move(direction));
  }
  VectorXd result = VectorXd::Zero(dim);
  if (log_coef.empty()) return result;
  const double top = *std::max_element(log_coef.begin(), log_coef.end());
  for (std::size_t i = 0; i < log_coef.size(); ++i) result += std::exp(log_coef[i] - top) * directions[i];
  return std::exp(top) * result;
}

VectorXd VertexInterpolant::gradient(const Eigen::Ref<const VectorXd>& x) const {
  const double k = static_cast<double>(k_);
  return 4.0 * k * k * scaled_gradient(x);
}

MatrixXd assemble_A(const Polytope& p, const FacetForms& forms, std::int64_t k) {
  const int n = p.num_vertices();
  const VertexInterpolant kernel(p, forms, k, VectorXd::Ones(n));
  MatrixXd a(n, n);
  for (int w = 0; w < n; ++w) {
    VectorXd q = forms.values(p.vertex(w));
    for (int f : p.incidence[static_cast<std::size_t>(w)]) q(f) = 0.0;
    for (int v = 0; v < n; ++v) a(w, v) = std::exp(kernel.log_vertex_kernel(v, q));
  }
  return a;
}

double deviation_from_identity(const MatrixXd& a) {
  const MatrixXd diff = a - MatrixXd::Identity(a.rows(), a.cols());
  return diff.cwiseAbs().rowwise().sum().maxCoeff();
}

VectorXd solve_weights(const MatrixXd& a) {
  const Eigen::PartialPivLU<MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13)) {
    throw InterpolantError(InterpolantErrorKind::SingularMatrix, "A_k is singular to working precision");
  }
  const VectorXd y = lu.solve(VectorXd::Ones(a.rows()));
  if (!y.allFinite()) throw InterpolantError(InterpolantErrorKind::SingularMatrix, "A_k solve produced non-finite weights");
  if ((y.array() <= 0.0).any()) {
    throw InterpolantError(InterpolantErrorKind::NotAccepted, "interpolation weights are not all positive");
  }
  return y;
}

InterpolantParams interpolant_params(const Polytope& p, const FacetForms& forms, std::int64_t k) {
  InterpolantParams params;
  params.k = k;
  const MatrixXd a = assemble_A(p, forms, k);
  params.aDeviation = deviation_from_identity(a);
  params.y = solve_weights(a);
  params.lambdas = form_scalings(p);
  return params;
}

double eval_f_k(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                const Eigen::Ref<const VectorXd>& x) {
  return VertexInterpolant(p, forms, params.k, params.y).value(x);
}

VectorXd grad_f_k(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                  const Eigen::Ref<const VectorXd>& x) {
  return VertexInterpolant(p, forms, params.k, params.y).gradient(x);
}

EpsilonParams epsilon_params(const MetricParams& mp, int m, int d) {
  if (m <= d) throw std::invalid_argument("epsilon_params needs more facets than dimensions");
  const double slack = 1.0 - mp.gamma;
  const int excess = m - d;
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  EpsilonParams eps;
  eps.eps1_power_bound = std::pow(slack / (4.0 * (1 + d)), excess);
  eps.eps1_alpha_bound = slack / (2.0 * (1 + d) * sqrt_d * mp.alpha);
  eps.eps1 = std::min(eps.eps1_power_bound, eps.eps1_alpha_bound);

  eps.eps2_remainder_bound = 5.0 * std::pow(slack, excess) /
                             (18.0 * binomial(d, d / 2) * std::pow(2.0, excess) *
                              (std::pow(3.0, excess) - std::pow(2.0, excess)));
  eps.eps2 = std::min(eps.eps1, eps.eps2_remainder_bound);

  eps.eps3_divisor = (d - 1) + (binomial(m, d - 1) - d) * std::pow(2.0 * (1 + d) / slack, excess);
  eps.eps3 = eps.eps2 / eps.eps3_divisor;

  eps.delta = slack / (1 + d) - eps.eps1 * sqrt_d * mp.alpha;
  if (!(eps.delta > 0.0)) {
    throw InterpolantError(InterpolantErrorKind::NonpositiveDelta, "delta = (1-gamma)/(1+d) - eps1 sqrt(d) alpha is not positive");
  }
  return eps;
}

KBounds quantitative_k(const MetricParams& mp, int n, int d, std::optional<double> eps) {
  if (!(mp.gamma < 1.0)) throw std::invalid_argument("gamma must be below one");
  if (eps && !(*eps > 0.0)) throw std::invalid_argument("eps must be positive");
  KBounds kb;
  if (mp.gamma > 0.0) kb.gamma_bound = 1.0 / (2.0 * std::log2(1.0 / mp.gamma));
  kb.vertex_bound = 2.0 * std::log2(4.0 * n);
  if (eps) kb.eps_bound = std::log2(2.0 * mp.degP) / (2.0 * std::log1p(*eps) / std::log(2.0));
  kb.cone_bound = 3.0 * std::log2(12.0 * n * std::sqrt(static_cast<double>(d)) * mp.alpha * mp.degP);

  const double candidates[4] = {kb.gamma_bound.value_or(-1.0), kb.vertex_bound, kb.eps_bound.value_or(-1.0), kb.cone_bound};
  kb.binding = static_cast<int>(std::max_element(std::begin(candidates), std::end(candidates)) - std::begin(candidates));
  const double top = std::ceil(candidates[kb.binding]);
  kb.saturated = !(top <= static_cast<double>(kMaxRepresentableK));
  kb.k = kb.saturated ? kMaxRepresentableK : std::max<std::int64_t>(1, static_cast<std::int64_t>(top));
  return kb;
}

KSearchResult find_k(const Polytope& p, const FacetForms& forms, const InterpolantVerifier& verifier,
                     const KSearchOptions& options) {
  require_normalized(forms);
  auto attempt = [&](std::int64_t k) -> std::optional<InterpolantParams> {
    try {
      InterpolantParams params = interpolant_params(p, forms, k);
      const VertexInterpolant f(p, forms, k, params.y);
      if (verifier(f, params)) return params;
    } catch (const InterpolantError& e) {
      if (e.kind() != InterpolantErrorKind::SingularMatrix && e.kind() != InterpolantErrorKind::NotAccepted) throw;
    }
    return std::nullopt;
  };

  KSearchResult result;
  if (options.policy == KPolicy::Search) {
    for (std::int64_t k = 1; k <= options.k_max; ++k) {
      ++result.attempts;
      if (auto params = attempt(k)) {
        result.params = std::move(*params);
        return result;
      }
    }
    throw InterpolantError(InterpolantErrorKind::ExhaustedKMax,
                           "no accepted k in 1.." + std::to_string(options.k_max));
  }

  std::int64_t k = options.fixed_k;
  if (options.policy == KPolicy::Direct) {
    const MetricParams mp = metric_params(p, forms);
    const double eps = options.eps.value_or(epsilon_params(mp, p.num_facets(), p.dim).eps3);
    k = quantitative_k(mp, p.num_vertices(), p.dim, eps).k;
  }
  result.attempts = 1;
  if (auto params = attempt(k)) {
    result.params = std::move(*params);
    return result;
  }
  throw InterpolantError(InterpolantErrorKind::NotAccepted, "k = " + std::to_string(k) + " was not accepted");
}

}  // namespace polyrep
