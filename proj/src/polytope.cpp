#include "polyrep/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace polyrep {

using nlohmann::json;

namespace {

Rational json_number(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_unsigned()) return Rational(value.get<std::uint64_t>());
  if (value.is_number_float()) return rational_from_double(value.get<double>());
  throw PolytopeError(PolytopeErrorKind::Malformed, "expected a number or a \"p/q\" string, got " + value.dump());
}

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  if (k > n || k < 0) return;
  std::vector<int> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    visit(static_cast<const std::vector<int>&>(subset));
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
}

MatrixXd normal_rows(const std::vector<HalfSpace>& halfspaces, const std::vector<int>& rows, int dim) {
  MatrixXd result(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    result.row(static_cast<Eigen::Index>(r)) = halfspaces[static_cast<std::size_t>(rows[r])].normal.transpose();
  }
  return result;
}

constexpr double kRankTol = 1e-10;

// A nonzero direction y with a_j . y <= 0 for all j, if the normals admit one.
bool has_recession_direction(const HRep& hrep) {
  const int d = hrep.dim;
  const int m = static_cast<int>(hrep.size());
  std::vector<int> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), 0);
  Eigen::FullPivLU<MatrixXd> full(normal_rows(hrep.halfspaces, all, d));
  full.setThreshold(kRankTol);
  if (full.rank() < d) return true;  // lineality space

  bool found = false;
  for_each_subset(m, d - 1, [&](const std::vector<int>& subset) {
    if (found) return;
    MatrixXd rows = normal_rows(hrep.halfspaces, subset, d);
    Eigen::FullPivLU<MatrixXd> lu(rows);
    lu.setThreshold(kRankTol);
    if (lu.rank() != d - 1) return;
    VectorXd y = lu.kernel().col(0);
    y.normalize();
    bool nonpositive = true;
    bool nonnegative = true;
    for (const auto& h : hrep.halfspaces) {
      const double s = h.normal.dot(y);
      if (s > kFeasibilityTol) nonpositive = false;
      if (s < -kFeasibilityTol) nonnegative = false;
    }
    found = nonpositive || nonnegative;
  });
  return found;
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

HRep hrep_from_raw(int dim, std::vector<RawInequality> raw) {
  if (dim < 2) throw PolytopeError(PolytopeErrorKind::DimensionTooSmall, "dimension must be at least 2");
  HRep hrep;
  hrep.dim = dim;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const auto& ineq = raw[j];
    if (ineq.a.size() != dim) {
      throw PolytopeError(PolytopeErrorKind::Malformed,
                          "inequality " + std::to_string(j) + " has " + std::to_string(ineq.a.size()) +
                              " coefficients, expected " + std::to_string(dim));
    }
    VectorXd normal(dim);
    for (int i = 0; i < dim; ++i) normal(i) = to_double(ineq.a(i));
    const double norm = normal.norm();
    if (norm == 0.0) throw PolytopeError(PolytopeErrorKind::ZeroNormal, "inequality " + std::to_string(j) + " has a zero normal");
    hrep.halfspaces.push_back({normal / norm, to_double(ineq.b) / norm});
  }
  hrep.raw = std::move(raw);
  return hrep;
}

HRep parse_hrep(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PolytopeError(PolytopeErrorKind::Malformed, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("inequalities") || !doc["dim"].is_number_integer() ||
      !doc["inequalities"].is_array()) {
    throw PolytopeError(PolytopeErrorKind::Malformed, "H-rep document needs integer \"dim\" and array \"inequalities\"");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 2) throw PolytopeError(PolytopeErrorKind::DimensionTooSmall, "dimension must be at least 2");
  std::vector<RawInequality> raw;
  try {
    for (const auto& entry : doc["inequalities"]) {
      if (!entry.is_object() || !entry.contains("a") || !entry.contains("b") || !entry["a"].is_array()) {
        throw PolytopeError(PolytopeErrorKind::Malformed, "inequality must be {\"a\": [...], \"b\": ...}");
      }
      RawInequality ineq;
      ineq.a.resize(static_cast<Eigen::Index>(entry["a"].size()));
      for (std::size_t i = 0; i < entry["a"].size(); ++i) ineq.a(static_cast<Eigen::Index>(i)) = json_number(entry["a"][i]);
      ineq.b = json_number(entry["b"]);
      raw.push_back(std::move(ineq));
    }
  } catch (const std::invalid_argument& e) {
    throw PolytopeError(PolytopeErrorKind::Malformed, e.what());
  }
  if (raw.empty()) throw PolytopeError(PolytopeErrorKind::Malformed, "no inequalities");
  return hrep_from_raw(dim, std::move(raw));
}

Polytope enumerate_vertices(const HRep& hrep) {
  const int d = hrep.dim;
  const int m = static_cast<int>(hrep.size());
  if (d < 2) throw PolytopeError(PolytopeErrorKind::DimensionTooSmall, "dimension must be at least 2");
  if (m <= d) throw PolytopeError(PolytopeErrorKind::Unbounded, "fewer than d+1 inequalities cannot bound a polytope");

  std::vector<VectorXd> points;
  for_each_subset(m, d, [&](const std::vector<int>& subset) {
    MatrixXd rows = normal_rows(hrep.halfspaces, subset, d);
    Eigen::FullPivLU<MatrixXd> lu(rows);
    lu.setThreshold(kRankTol);
    if (!lu.isInvertible()) return;
    VectorXd rhs(d);
    for (int i = 0; i < d; ++i) rhs(i) = hrep.halfspaces[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])].offset;
    VectorXd x = lu.solve(rhs);
    for (const auto& h : hrep.halfspaces) {
      if (h.normal.dot(x) - h.offset > kFeasibilityTol) return;
    }
    for (const auto& p : points) {
      if ((p - x).norm() <= kDedupTol) return;
    }
    points.push_back(std::move(x));
  });

  if (has_recession_direction(hrep)) {
    throw PolytopeError(PolytopeErrorKind::Unbounded, points.empty() ? "polyhedron is empty or unbounded" : "polyhedron is unbounded");
  }
  if (points.empty()) throw PolytopeError(PolytopeErrorKind::Empty, "inequalities are infeasible");
  std::sort(points.begin(), points.end(), lex_less);

  Polytope p;
  p.dim = d;
  p.facets = hrep.halfspaces;
  p.raw = hrep.raw;
  p.vertices.resize(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) p.vertices.row(static_cast<Eigen::Index>(i)) = points[i].transpose();

  constexpr double kAmbiguousSlack = 1e-7;
  std::vector<int> support(static_cast<std::size_t>(m), 0);
  for (const auto& x : points) {
    std::vector<int> incident;
    for (int j = 0; j < m; ++j) {
      const auto& h = hrep.halfspaces[static_cast<std::size_t>(j)];
      const double slack = h.offset - h.normal.dot(x);
      if (slack <= kFeasibilityTol) {
        incident.push_back(j);
        ++support[static_cast<std::size_t>(j)];
      } else if (slack <= kAmbiguousSlack) {
        throw PolytopeError(PolytopeErrorKind::Degenerate,
                            "inequality " + std::to_string(j) + " passes within " + std::to_string(slack) +
                                " of a vertex; incidence is numerically ambiguous");
      }
    }
    p.incidence.push_back(std::move(incident));
  }
  for (int j = 0; j < m; ++j) {
    if (support[static_cast<std::size_t>(j)] < d) {
      throw PolytopeError(PolytopeErrorKind::RedundantInequality,
                          "inequality " + std::to_string(j) + " touches " + std::to_string(support[static_cast<std::size_t>(j)]) +
                              " vertices and does not define a facet");
    }
  }

  MatrixXd spread = p.vertices.rowwise() - p.vertices.row(0);
  Eigen::FullPivLU<MatrixXd> rank_lu(spread);
  rank_lu.setThreshold(kRankTol);
  if (rank_lu.rank() < d) throw PolytopeError(PolytopeErrorKind::Degenerate, "polytope is not full-dimensional");

  for (int i = 0; i < p.num_vertices(); ++i) {
    for (int k = i + 1; k < p.num_vertices(); ++k) {
      p.diameter = std::max(p.diameter, (p.vertices.row(i) - p.vertices.row(k)).norm());
    }
  }
  return p;
}

std::vector<int> Polytope::facet_vertices(int facet) const {
  std::vector<int> result;
  for (int v = 0; v < num_vertices(); ++v) {
    const auto& inc = incidence[static_cast<std::size_t>(v)];
    if (std::binary_search(inc.begin(), inc.end(), facet)) result.push_back(v);
  }
  return result;
}

bool check_simple(const Polytope& p) {
  return std::all_of(p.incidence.begin(), p.incidence.end(),
                     [&](const auto& inc) { return static_cast<int>(inc.size()) == p.dim; });
}

double support_value(const Polytope& p, const Eigen::Ref<const VectorXd>& u) {
  return (p.vertices * u).maxCoeff();
}

VectorXd FacetForms::values(const Eigen::Ref<const VectorXd>& x) const {
  VectorXd result(static_cast<Eigen::Index>(forms.size()));
  for (std::size_t j = 0; j < forms.size(); ++j) result(static_cast<Eigen::Index>(j)) = forms[j](x);
  return result;
}

FacetForms facet_forms(const Polytope& p, FormMode mode) {
  FacetForms result;
  result.normalized = mode == FormMode::Normalized;
  for (std::size_t j = 0; j < p.facets.size(); ++j) {
    AffineForm<double> form;
    if (mode == FormMode::Normalized) {
      const VectorXd& u = p.facets[j].normal;
      form.linear = -u / p.diameter;
      form.constant = support_value(p, u) / p.diameter;
    } else {
      const auto& raw = p.raw[j];
      form.linear.resize(p.dim);
      for (int i = 0; i < p.dim; ++i) form.linear(i) = -to_double(raw.a(i));
      form.constant = to_double(raw.b);
    }
    result.forms.push_back(std::move(form));
  }
  return result;
}

std::vector<AffineForm<Rational>> raw_forms_exact(const Polytope& p) {
  std::vector<AffineForm<Rational>> result;
  for (const auto& raw : p.raw) {
    AffineForm<Rational> form;
    form.linear.resize(raw.a.size());
    for (Eigen::Index i = 0; i < raw.a.size(); ++i) form.linear(i) = -raw.a(i);
    form.constant = raw.b;
    result.push_back(std::move(form));
  }
  return result;
}

VectorXd form_scalings(const Polytope& p) {
  VectorXd lambdas(p.num_facets());
  for (int j = 0; j < p.num_facets(); ++j) {
    VectorXd a(p.dim);
    for (int i = 0; i < p.dim; ++i) a(i) = to_double(p.raw[static_cast<std::size_t>(j)].a(i));
    lambdas(j) = 1.0 / (a.norm() * p.diameter);
  }
  return lambdas;
}

MatrixXd vertex_normal_matrix(const Polytope& p, int vertex) {
  return normal_rows(p.facets, p.incidence[static_cast<std::size_t>(vertex)], p.dim);
}

std::vector<std::pair<int, int>> edges(const Polytope& p) {
  std::vector<std::pair<int, int>> result;
  const int n = p.num_vertices();
  for (int v = 0; v < n; ++v) {
    for (int w = v + 1; w < n; ++w) {
      const auto& iv = p.incidence[static_cast<std::size_t>(v)];
      const auto& iw = p.incidence[static_cast<std::size_t>(w)];
      std::vector<int> common;
      std::set_intersection(iv.begin(), iv.end(), iw.begin(), iw.end(), std::back_inserter(common));
      if (static_cast<int>(common.size()) < p.dim - 1) continue;
      Eigen::FullPivLU<MatrixXd> lu(normal_rows(p.facets, common, p.dim));
      lu.setThreshold(kRankTol);
      if (lu.rank() != p.dim - 1) continue;
      bool minimal = true;
      for (int u = 0; u < n && minimal; ++u) {
        if (u == v || u == w) continue;
        const auto& iu = p.incidence[static_cast<std::size_t>(u)];
        minimal = !std::includes(iu.begin(), iu.end(), common.begin(), common.end());
      }
      if (minimal) result.emplace_back(v, w);
    }
  }
  return result;
}

MetricParams metric_params(const Polytope& p, const FacetForms& forms) {
  if (!forms.normalized) throw std::invalid_argument("metric_params needs normalized facet forms");
  MetricParams mp;
  const int n = p.num_vertices();
  const int m = p.num_facets();

  for (int v = 0; v < n; ++v) {
    const auto& inc = p.incidence[static_cast<std::size_t>(v)];
    mp.degP = std::max(mp.degP, static_cast<int>(inc.size()));
    const VectorXd x = p.vertex(v);
    for (int j = 0; j < m; ++j) {
      if (std::binary_search(inc.begin(), inc.end(), j)) continue;
      mp.gamma = std::max(mp.gamma, 1.0 - forms.forms[static_cast<std::size_t>(j)](x));
    }

    // alpha(v): max over d-subsets of incident facets of |U_X^{-1}|_2 = 1 / sigma_min(U_X).
    for_each_subset(static_cast<int>(inc.size()), p.dim, [&](const std::vector<int>& pick) {
      std::vector<int> rows;
      for (int r : pick) rows.push_back(inc[static_cast<std::size_t>(r)]);
      Eigen::JacobiSVD<MatrixXd> svd(normal_rows(p.facets, rows, p.dim));
      const double smallest = svd.singularValues()(p.dim - 1);
      if (!(smallest > 1e-12)) {
        throw PolytopeError(PolytopeErrorKind::SingularNormalMatrix,
                            "normal matrix at vertex " + std::to_string(v) + " is singular");
      }
      mp.alpha = std::max(mp.alpha, 1.0 / smallest);
    });
  }

  mp.phi = M_PI / 2;
  for (const auto& [v, w] : edges(p)) {
    const VectorXd direction = (p.vertex(w) - p.vertex(v)).normalized();
    const auto& iv = p.incidence[static_cast<std::size_t>(v)];
    const auto& iw = p.incidence[static_cast<std::size_t>(w)];
    for (int j = 0; j < m; ++j) {
      const bool on_v = std::binary_search(iv.begin(), iv.end(), j);
      const bool on_w = std::binary_search(iw.begin(), iw.end(), j);
      if (on_v == on_w) continue;
      const double s = std::min(1.0, std::abs(p.facets[static_cast<std::size_t>(j)].normal.dot(direction)));
      mp.phi = std::min(mp.phi, std::asin(s));
    }
  }
  return mp;
}

double hrep_margin(const Polytope& p, const Eigen::Ref<const VectorXd>& x) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& h : p.facets) margin = std::min(margin, h.offset - h.normal.dot(x));
  return margin;
}

}  // namespace polyrep
