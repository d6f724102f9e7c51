#include "polyrep/representation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>

#include "polyrep/symmetric.hpp"

namespace polyrep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

  VectorXd gaussian(int dim) {
    std::normal_distribution<double> normal;
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(engine_);
    return v;
  }

  VectorXd in_box(const VectorXd& lo, const VectorXd& hi) {
    VectorXd x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) x(i) = uniform(lo(i), hi(i));
    return x;
  }

  // Flat Dirichlet weights.
  VectorXd simplex_weights(int count) {
    std::exponential_distribution<double> exponential;
    VectorXd w(count);
    for (int i = 0; i < count; ++i) w(i) = exponential(engine_);
    return w / w.sum();
  }

  // Random convex combination of the given rows of `points`.
  VectorXd convex_combination(const MatrixXd& points, const std::vector<int>& rows) {
    const VectorXd w = simplex_weights(static_cast<int>(rows.size()));
    VectorXd x = VectorXd::Zero(points.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) x += w(static_cast<Eigen::Index>(i)) * points.row(rows[i]).transpose();
    return x;
  }

  // Up to `count` distinct indices from 0..n-1.
  std::vector<int> subset(int n, int count) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), engine_);
    all.resize(static_cast<std::size_t>(std::min(n, count)));
    return all;
  }

 private:
  std::mt19937_64 engine_;
};

int max_degree(const Polytope& p) {
  int deg = 0;
  for (const auto& inc : p.incidence) deg = std::max(deg, static_cast<int>(inc.size()));
  return deg;
}

void record(VerificationReport& report, std::size_t cap, Violation violation) {
  if (report.violations.size() < std::max<std::size_t>(cap, 1)) report.violations.push_back(std::move(violation));
}

// Direction x - v for a random point of C_v (unit length).
VectorXd cone_direction(const Polytope& p, int vertex, Sampler& sampler) {
  const int d = p.dim;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const VectorXd t = sampler.gaussian(d);
    if (-t.sum() >= (2.0 / 3.0) * t.norm()) {
      const VectorXd step = point_from_vertex_forms(p, vertex, t) - p.vertex(vertex);
      return step.normalized();
    }
  }
  // -1 always lies in the cone.
  return (point_from_vertex_forms(p, vertex, -VectorXd::Ones(d)) - p.vertex(vertex)).normalized();
}

MatrixXd inflated_vertices(const Polytope& p, double eps) {
  MatrixXd result(p.num_vertices(), p.dim);
  for (int v = 0; v < p.num_vertices(); ++v) result.row(v) = inflated_vertex(p, v, eps).transpose();
  return result;
}

// Points of conv(rows of `points`): mixes of random (d+1)-subsets and of single facets,
// so samples land both deep inside and on the boundary.
VectorXd hull_sample(const Polytope& p, const MatrixXd& points, Sampler& sampler) {
  if (sampler.uniform(0.0, 1.0) < 0.5) {
    return sampler.convex_combination(points, sampler.subset(p.num_vertices(), p.dim + 1));
  }
  return sampler.convex_combination(points, p.facet_vertices(sampler.index(p.num_facets())));
}

void fold_worst_min(ProbeResult& r, double value) {
  r.worst = r.samples == 0 ? value : std::min(r.worst, value);
}

}  // namespace

// ---------------------------------------------------------------------------

VectorXd PolyRepresentation::values(const Eigen::Ref<const VectorXd>& x) const {
  VectorXd result(dim);
  const double log_f = interpolant.log_value(x);
  result(0) = log_f == kNegInf ? 1.0 : 1.0 - std::exp(log_f);
  const VectorXd sigma = elem_sym_all(sigma_forms.values(x));
  for (int i = 1; i < dim; ++i) result(i) = sigma(sigma_level(i));
  return result;
}

double PolyRepresentation::value(int i, const Eigen::Ref<const VectorXd>& x) const {
  if (i == 0) {
    const double log_f = interpolant.log_value(x);
    return log_f == kNegInf ? 1.0 : 1.0 - std::exp(log_f);
  }
  return elem_sym_all(sigma_forms.values(x))(sigma_level(i));
}

bool PolyRepresentation::contains(const Eigen::Ref<const VectorXd>& x) const {
  return (values(x).array() >= 0.0).all();
}

std::string polytope_hash(const Polytope& p) {
  std::uint64_t hash = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
    hash ^= 0xff;
    hash *= 1099511628211ULL;
  };
  feed(std::to_string(p.dim));
  for (const auto& ineq : p.raw) {
    for (Eigen::Index i = 0; i < ineq.a.size(); ++i) feed(to_string(ineq.a(i)));
    feed(to_string(ineq.b));
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

PolyRepresentation build_representation(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                                        FormMode mode, double term_cap) {
  if (!check_simple(p)) throw std::invalid_argument("the representation needs a simple polytope");
  PolyRepresentation rep{.dim = p.dim,
                         .num_facets = p.num_facets(),
                         .mode = mode,
                         .sigma_forms = mode == FormMode::Normalized ? forms : facet_forms(p, FormMode::Raw),
                         .interpolant = VertexInterpolant(p, forms, params.k, params.y),
                         .params = params,
                         .expanded = {},
                         .expanded_exact = {},
                         .polytope_hash = {},
                         .eps = std::nullopt};
  rep.polytope_hash = polytope_hash(p);
  try {
    rep.eps = epsilon_params(metric_params(p, forms), p.num_facets(), p.dim);
  } catch (const InterpolantError&) {
    rep.eps.reset();
  }

  const int top = rep.sigma_level(p.dim - 1);  // = m
  rep.expanded.resize(static_cast<std::size_t>(p.dim - 1));
  rep.expanded_exact.resize(static_cast<std::size_t>(p.dim - 1));
  try {
    if (mode == FormMode::Raw) {
      const auto sigma = expand_sigma_all(raw_forms_exact(p), top, term_cap);
      for (int i = 1; i < p.dim; ++i) {
        const auto& exact = sigma[static_cast<std::size_t>(rep.sigma_level(i))];
        rep.expanded_exact[static_cast<std::size_t>(i - 1)] = exact;
        SparsePoly<double> approx(exact.dim());
        for (const auto& [mono, coef] : exact.terms()) approx.add_term(mono, to_double(coef));
        rep.expanded[static_cast<std::size_t>(i - 1)] = std::move(approx);
      }
    } else {
      const auto sigma = expand_sigma_all(rep.sigma_forms.forms, top, term_cap);
      for (int i = 1; i < p.dim; ++i) {
        rep.expanded[static_cast<std::size_t>(i - 1)] = sigma[static_cast<std::size_t>(rep.sigma_level(i))];
      }
    }
  } catch (const ExpansionTooLarge&) {
    // evaluation closures only
  }
  return rep;
}

void VerificationReport::merge(const VerificationReport& other) {
  samplesInside += other.samplesInside;
  samplesOutside += other.samplesOutside;
  samplesInBand += other.samplesInBand;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  if (faceVanishMax.size() < other.faceVanishMax.size()) faceVanishMax.resize(other.faceVanishMax.size(), 0.0);
  for (std::size_t i = 0; i < other.faceVanishMax.size(); ++i) {
    faceVanishMax[i] = std::max(faceVanishMax[i], other.faceVanishMax[i]);
  }
  if (other.sandwichOk) sandwichOk = sandwichOk.value_or(true) && *other.sandwichOk;
  if (other.coneOk) coneOk = coneOk.value_or(true) && *other.coneOk;
}

// ---------------------------------------------------------------------------

VerificationReport verify_membership(const PolyRepresentation& rep, const Polytope& p, const MembershipOptions& options) {
  if (options.samples < 1) throw std::invalid_argument("sample count must be positive");
  VerificationReport report;
  report.seed = options.seed;
  report.boundaryBand = options.band >= 0.0 ? options.band : 1e-6 * p.diameter;
  const double eps3 = rep.eps ? rep.eps->eps3 : 0.0;
  const double inflation = options.inflation >= 0.0 ? options.inflation : 2.0 * eps3 * p.diameter;

  const VectorXd lo = p.vertices.colwise().minCoeff().transpose();
  const VectorXd hi = p.vertices.colwise().maxCoeff().transpose();
  const VectorXd pad = VectorXd::Constant(p.dim, inflation);
  const VectorXd shell = VectorXd::Constant(p.dim, 0.25 * p.diameter);
  Sampler sampler(options.seed);

  auto check = [&](const VectorXd& x) {
    const double margin = hrep_margin(p, x);
    if (std::abs(margin) <= report.boundaryBand) {
      ++report.samplesInBand;
      return;
    }
    const bool in_p = margin > 0.0;
    (in_p ? report.samplesInside : report.samplesOutside) += 1;
    const VectorXd values = rep.values(x);
    const bool in_rep = (values.array() >= 0.0).all();
    if (in_p == in_rep) return;
    Violation v{.check = "membership", .point = x};
    if (in_p) {
      Eigen::Index worst;
      v.margin = values.minCoeff(&worst);
      v.index = static_cast<int>(worst);
    } else {
      Eigen::Index worst;
      VectorXd slack(p.num_facets());
      for (int j = 0; j < p.num_facets(); ++j) {
        slack(j) = p.facets[static_cast<std::size_t>(j)].offset - p.facets[static_cast<std::size_t>(j)].normal.dot(x);
      }
      v.margin = slack.minCoeff(&worst);
      v.index = static_cast<int>(worst);
    }
    record(report, options.max_recorded, std::move(v));
  };

  for (std::int64_t s = 0; s < options.samples; ++s) check(sampler.in_box(lo - pad, hi + pad));
  for (std::int64_t s = 0; s < options.samples / 4; ++s) check(sampler.in_box(lo - shell, hi + shell));

  const double radii[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5};
  constexpr int kRaysPerVertex = 64;
  for (int v = 0; v < p.num_vertices(); ++v) {
    const VectorXd vertex = p.vertex(v);
    check(vertex);
    for (int ray = 0; ray < kRaysPerVertex; ++ray) {
      const VectorXd cone = cone_direction(p, v, sampler);
      const VectorXd any = sampler.gaussian(p.dim).normalized();
      for (double r : radii) {
        check(vertex + r * p.diameter * cone);
        check(vertex + r * p.diameter * any);
      }
    }
  }
  for (int f = 0; f < p.num_facets(); ++f) {
    const auto on_facet = p.facet_vertices(f);
    VectorXd centroid = VectorXd::Zero(p.dim);
    for (int v : on_facet) centroid += p.vertex(v);
    centroid /= static_cast<double>(on_facet.size());
    check(centroid);
    for (double r : radii) check(centroid + r * p.diameter * p.facets[static_cast<std::size_t>(f)].normal);
  }
  for (const auto& [v, w] : edges(p)) {
    const VectorXd mid = 0.5 * (p.vertex(v) + p.vertex(w));
    check(mid);
    VectorXd outward = VectorXd::Zero(p.dim);
    const auto& iv = p.incidence[static_cast<std::size_t>(v)];
    const auto& iw = p.incidence[static_cast<std::size_t>(w)];
    for (int f : iv) {
      if (std::binary_search(iw.begin(), iw.end(), f)) outward += p.facets[static_cast<std::size_t>(f)].normal;
    }
    if (outward.norm() > 0) {
      outward.normalize();
      for (double r : radii) check(mid + r * p.diameter * outward);
    }
  }
  return report;
}

std::vector<std::vector<int>> faces_of_dimension(const Polytope& p, int i) {
  if (i < 0 || i >= p.dim) throw std::invalid_argument("face dimension out of range");
  const int codim = p.dim - i;
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> faces;
  for (int v = 0; v < p.num_vertices(); ++v) {
    const auto& inc = p.incidence[static_cast<std::size_t>(v)];
    const int deg = static_cast<int>(inc.size());
    if (codim > deg) continue;
    std::vector<bool> mask(static_cast<std::size_t>(deg), false);
    std::fill(mask.begin(), mask.begin() + codim, true);
    do {
      std::vector<int> facets;
      for (int r = 0; r < deg; ++r) {
        if (mask[static_cast<std::size_t>(r)]) facets.push_back(inc[static_cast<std::size_t>(r)]);
      }
      if (!seen.insert(facets).second) continue;
      std::vector<int> members;
      for (int w = 0; w < p.num_vertices(); ++w) {
        const auto& iw = p.incidence[static_cast<std::size_t>(w)];
        if (std::includes(iw.begin(), iw.end(), facets.begin(), facets.end())) members.push_back(w);
      }
      faces.push_back(std::move(members));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return faces;
}

VerificationReport verify_face_vanishing(const PolyRepresentation& rep, const Polytope& p, int samples_per_face,
                                         std::uint64_t seed, double tol) {
  VerificationReport report;
  report.seed = seed;
  report.faceVanishMax.assign(static_cast<std::size_t>(p.dim), 0.0);
  Sampler sampler(seed);
  for (int i = 0; i < p.dim; ++i) {
    for (const auto& face : faces_of_dimension(p, i)) {
      const int count = face.size() == 1 ? 1 : samples_per_face;
      for (int s = 0; s < count; ++s) {
        const VectorXd x = sampler.convex_combination(p.vertices, face);
        const double value = std::abs(rep.value(i, x));
        auto& worst = report.faceVanishMax[static_cast<std::size_t>(i)];
        worst = std::max(worst, value);
        if (!(value <= tol)) record(report, 100, Violation{.check = "face", .point = x, .index = i, .margin = value});
      }
    }
  }
  return report;
}

VerificationReport verify_sandwich(const PolyRepresentation& rep, const Polytope& p, double eps, std::int64_t samples,
                                   std::uint64_t seed) {
  VerificationReport report;
  report.seed = seed;
  Sampler sampler(seed);
  const FacetForms forms = facet_forms(p, FormMode::Normalized);
  const double upper = std::log1p(1e-9);

  // P inside S_k
  auto inside_check = [&](const VectorXd& x) {
    ++report.samplesInside;
    const double log_f = rep.interpolant.log_value(x);
    if (!(log_f <= upper)) record(report, 100, Violation{.check = "sandwich", .point = x, .index = 0, .margin = log_f});
  };
  for (int v = 0; v < p.num_vertices(); ++v) inside_check(p.vertex(v));
  for (std::int64_t s = 0; s < samples; ++s) inside_check(hull_sample(p, p.vertices, sampler));

  // S_k inside P_eps
  const VectorXd lo = p.vertices.colwise().minCoeff().transpose();
  const VectorXd hi = p.vertices.colwise().maxCoeff().transpose();
  const VectorXd pad = VectorXd::Constant(p.dim, 0.1 * p.diameter);
  auto outside_check = [&](const VectorXd& x) {
    if (!(rep.interpolant.log_value(x) <= 0.0)) return;
    ++report.samplesOutside;
    const double worst = forms.values(x).minCoeff();
    if (worst < -eps - 1e-9) record(report, 100, Violation{.check = "sandwich", .point = x, .index = 1, .margin = worst});
  };
  for (std::int64_t s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      outside_check(sampler.in_box(lo - pad, hi + pad));
    } else {
      const int f = sampler.index(p.num_facets());
      const VectorXd on_facet = sampler.convex_combination(p.vertices, p.facet_vertices(f));
      const double push = sampler.log_uniform(0.1 * eps, 10.0 * eps + 1e-12) * p.diameter;
      outside_check(on_facet + push * p.facets[static_cast<std::size_t>(f)].normal);
    }
  }
  report.sandwichOk = report.violations.empty();
  return report;
}

VerificationReport verify_cone_separation(const PolyRepresentation& rep, const Polytope& p, std::int64_t samples_per_vertex,
                                          std::uint64_t seed) {
  VerificationReport report;
  report.seed = seed;
  Sampler sampler(seed);
  const FacetForms forms = facet_forms(p, FormMode::Normalized);
  const double deg_p = max_degree(p);
  for (int v = 0; v < p.num_vertices(); ++v) {
    const VectorXd vertex = p.vertex(v);
    const VectorXd gradient = rep.interpolant.scaled_gradient(vertex);
    for (std::int64_t s = 0; s < samples_per_vertex; ++s) {
      const double radius = sampler.log_uniform(1e-6, 0.25) * p.diameter;
      const VectorXd x = vertex + radius * cone_direction(p, v, sampler);
      ++report.samplesOutside;
      const double log_f = rep.interpolant.log_value(x);
      if (!(log_f > 0.0)) record(report, 100, Violation{.check = "cone", .point = x, .index = v, .margin = log_f});
      const double lhs = gradient.dot(x - vertex);
      const double rhs = vertex_forms(p, forms, v, x).norm() / (3.0 * deg_p);
      if (!(lhs >= rhs - 1e-9)) {
        record(report, 100, Violation{.check = "gradient", .point = x, .index = v, .margin = lhs - rhs});
      }
    }
  }
  report.coneOk = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------

VectorXd vertex_forms(const Polytope& p, const FacetForms& forms, int vertex, const Eigen::Ref<const VectorXd>& x) {
  const auto& inc = p.incidence[static_cast<std::size_t>(vertex)];
  VectorXd t(static_cast<Eigen::Index>(inc.size()));
  for (std::size_t i = 0; i < inc.size(); ++i) t(static_cast<Eigen::Index>(i)) = forms.forms[static_cast<std::size_t>(inc[i])](x);
  return t;
}

bool in_vertex_cone(const Polytope& p, const FacetForms& forms, int vertex, const Eigen::Ref<const VectorXd>& x) {
  const VectorXd t = vertex_forms(p, forms, vertex, x);
  return -t.sum() >= (2.0 / 3.0) * t.norm();
}

VectorXd point_from_vertex_forms(const Polytope& p, int vertex, const Eigen::Ref<const VectorXd>& t) {
  const MatrixXd u = vertex_normal_matrix(p, vertex);
  return p.vertex(vertex) - p.diameter * u.partialPivLu().solve(t);
}

VectorXd inflated_vertex(const Polytope& p, int vertex, double eps) {
  return point_from_vertex_forms(p, vertex, VectorXd::Constant(p.dim, -eps));
}

HRep inflated_hrep(const Polytope& p, double eps) {
  std::vector<RawInequality> raw;
  for (const auto& facet : p.facets) {
    RawInequality ineq;
    ineq.a.resize(p.dim);
    for (int i = 0; i < p.dim; ++i) ineq.a(i) = rational_from_double(facet.normal(i));
    ineq.b = rational_from_double(support_value(p, facet.normal) + eps * p.diameter);
    raw.push_back(std::move(ineq));
  }
  return hrep_from_raw(p.dim, std::move(raw));
}

ProbeResult probe_low_sigmas_positive(const Polytope& p, const FacetForms& forms, double eps1, std::int64_t samples,
                                      std::uint64_t seed) {
  ProbeResult result;
  Sampler sampler(seed);
  const MatrixXd corners = inflated_vertices(p, eps1);
  const int excess = p.num_facets() - p.dim;
  for (std::int64_t s = 0; s < samples; ++s) {
    const VectorXd x = s < p.num_vertices() ? VectorXd(corners.row(s).transpose()) : hull_sample(p, corners, sampler);
    const VectorXd sigma = elem_sym_all(forms.values(x));
    const double lowest = sigma.segment(1, excess).minCoeff();
    fold_worst_min(result, lowest);
    ++result.samples;
    if (!(lowest > 0.0)) ++result.failures;
  }
  return result;
}

LowerBoundProbe probe_low_sigma_bounds(const Polytope& p, const FacetForms& forms, double eps1, double delta,
                                       std::int64_t samples, std::uint64_t seed) {
  LowerBoundProbe result;
  Sampler sampler(seed);
  const MatrixXd corners = inflated_vertices(p, eps1);
  const int m = p.num_facets();
  const int excess = m - p.dim;
  for (std::int64_t s = 0; s < samples; ++s) {
    const VectorXd x = hull_sample(p, corners, sampler);
    const VectorXd q = forms.values(x);
    const VectorXd sigma = elem_sym_all(q);
    for (int v = 0; v < p.num_vertices(); ++v) {
      const auto& inc = p.incidence[static_cast<std::size_t>(v)];
      bool member = true;
      for (int f = 0; f < m && member; ++f) {
        const bool at_v = std::binary_search(inc.begin(), inc.end(), f);
        member = at_v ? q(f) >= -eps1 : q(f) >= delta;
      }
      if (!member) continue;
      for (int i = 1; i <= excess; ++i) {
        const double pw = std::pow(2.0, i - 1) * eps1;
        const double displayed = binomial(excess, i) * (std::pow(delta, i) - pw) + binomial(m, i) * pw;
        const double derived = binomial(excess, i) * std::pow(delta, i) - (binomial(m, i) - binomial(excess, i)) * pw;
        fold_worst_min(result.displayed, sigma(i) - displayed);
        fold_worst_min(result.derived, sigma(i) - derived);
        ++result.displayed.samples;
        ++result.derived.samples;
        if (sigma(i) < displayed) ++result.displayed.failures;
        if (sigma(i) < derived) ++result.derived.failures;
      }
    }
  }
  return result;
}

ProbeResult probe_inflated_vertices(const Polytope& p, const FacetForms& forms, double eps, double alpha) {
  ProbeResult result;
  const double floor = -eps * std::sqrt(static_cast<double>(p.dim)) * alpha;
  const Polytope inflated = enumerate_vertices(inflated_hrep(p, eps));
  if (inflated.num_vertices() != p.num_vertices()) ++result.failures;
  for (int v = 0; v < p.num_vertices(); ++v) {
    const VectorXd corner = inflated_vertex(p, v, eps);
    const auto& inc = p.incidence[static_cast<std::size_t>(v)];
    for (int f = 0; f < p.num_facets(); ++f) {
      const double q = forms.forms[static_cast<std::size_t>(f)](corner);
      ++result.samples;
      fold_worst_min(result, q - floor);
      if (q < floor - 1e-12) ++result.failures;
      if (std::binary_search(inc.begin(), inc.end(), f) && std::abs(q + eps) > 1e-12) ++result.failures;
    }
    bool matched = false;
    for (int w = 0; w < inflated.num_vertices() && !matched; ++w) {
      matched = (inflated.vertex(w) - corner).norm() <= 1e-9 * p.diameter;
    }
    if (!matched) ++result.failures;
  }
  return result;
}

ProbeResult probe_cover(const Polytope& p, const FacetForms& forms, double eps, double delta, std::int64_t samples,
                        std::uint64_t seed) {
  ProbeResult result;
  Sampler sampler(seed);
  const MatrixXd corners = inflated_vertices(p, eps);
  for (std::int64_t s = 0; s < samples; ++s) {
    const VectorXd q = forms.values(hull_sample(p, corners, sampler));
    double best = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < p.num_vertices(); ++v) {
      const auto& inc = p.incidence[static_cast<std::size_t>(v)];
      double slack = std::numeric_limits<double>::infinity();
      for (int f = 0; f < p.num_facets(); ++f) {
        const bool at_v = std::binary_search(inc.begin(), inc.end(), f);
        slack = std::min(slack, at_v ? q(f) + eps : q(f) - delta);
      }
      best = std::max(best, slack);
    }
    fold_worst_min(result, best);
    ++result.samples;
    if (best < -1e-12) ++result.failures;
  }
  return result;
}

NeighborhoodProbe probe_vertex_neighborhoods(const Polytope& p, const FacetForms& forms, double eps2, std::int64_t samples,
                                             std::uint64_t seed) {
  NeighborhoodProbe result;
  Sampler sampler(seed);
  const int m = p.num_facets();
  const int d = p.dim;
  const int excess = m - d;
  const std::int64_t per_vertex = std::max<std::int64_t>(1, samples / p.num_vertices());
  for (int v = 0; v < p.num_vertices(); ++v) {
    const auto& inc = p.incidence[static_cast<std::size_t>(v)];
    for (std::int64_t s = 0; s < per_vertex; ++s) {
      VectorXd t(d);
      for (int i = 0; i < d; ++i) t(i) = sampler.uniform(-eps2, eps2);
      const VectorXd x = point_from_vertex_forms(p, v, t);
      const VectorXd q = forms.values(x);
      VectorXd q_bar(excess);
      for (int f = 0, r = 0; f < m; ++f) {
        if (!std::binary_search(inc.begin(), inc.end(), f)) q_bar(r++) = q(f);
      }
      const VectorXd q_v = vertex_forms(p, forms, v, x);
      const VectorXd sigma = elem_sym_all(q);
      bool upper_nonnegative = true;
      for (int i = excess + 2; i <= m; ++i) upper_nonnegative = upper_nonnegative && sigma(i) >= 0.0;
      if (upper_nonnegative) {
        const bool in_p = q.minCoeff() >= -1e-12;
        const bool in_cone = -q_v.sum() >= (2.0 / 3.0) * q_v.norm() - 1e-12;
        ++result.inclusion.samples;
        if (!in_p && !in_cone) ++result.inclusion.failures;
      }

      const VectorXd sv = elem_sym_all(q_v);
      const VectorXd sb = elem_sym_all(q_bar);
      double r2 = 0.0;
      for (int i = 3; i <= d; ++i) r2 += sv(i) * sigma_at(sb, excess + 2 - i);
      const double norm2 = q_v.squaredNorm();
      if (norm2 == 0.0) continue;
      const double base = sb(excess);
      const double g1 = 0.5 * base - r2 / norm2;
      const double g2 = base / (base - 2.0 * r2 / norm2);
      fold_worst_min(result.g1_positive, g1);
      fold_worst_min(result.g2_bounded, 2.25 - g2);
      ++result.g1_positive.samples;
      ++result.g2_bounded.samples;
      if (!(g1 > 0.0)) ++result.g1_positive.failures;
      if (!(g2 <= 2.25)) ++result.g2_bounded.failures;
    }
  }
  return result;
}

ProbeResult probe_shell_inclusion(const Polytope& p, const FacetForms& forms, double eps3, std::int64_t samples,
                                  std::uint64_t seed) {
  ProbeResult result;
  Sampler sampler(seed);
  const MatrixXd corners = inflated_vertices(p, eps3);
  const int m = p.num_facets();
  const int excess = m - p.dim;
  for (std::int64_t s = 0; s < samples; ++s) {
    const VectorXd x = hull_sample(p, corners, sampler);
    const VectorXd q = forms.values(x);
    const VectorXd sigma = elem_sym_all(q);
    bool upper_nonnegative = true;
    for (int i = excess + 2; i <= m; ++i) upper_nonnegative = upper_nonnegative && sigma(i) >= 0.0;
    if (!upper_nonnegative) continue;
    ++result.samples;
    if (q.minCoeff() >= 0.0) continue;
    bool covered = false;
    for (int v = 0; v < p.num_vertices() && !covered; ++v) covered = in_vertex_cone(p, forms, v, x);
    if (!covered) ++result.failures;
  }
  return result;
}

}  // namespace polyrep
