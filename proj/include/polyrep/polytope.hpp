#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyrep/numeric.hpp"
#include "polyrep/poly.hpp"

namespace polyrep {

/// Feasibility tolerance on unit-normal slacks.
inline constexpr double kFeasibilityTol = 1e-9;
/// Distance below which two vertex solutions are merged.
inline constexpr double kDedupTol = 1e-8;

enum class PolytopeErrorKind {
  Malformed,
  ZeroNormal,
  DimensionTooSmall,
  Unbounded,
  Empty,
  RedundantInequality,
  Degenerate,
  SingularNormalMatrix,
};

class PolytopeError : public std::runtime_error {
 public:
  PolytopeError(PolytopeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  PolytopeErrorKind kind() const { return kind_; }

 private:
  PolytopeErrorKind kind_;
};

/// normal . x <= offset
struct HalfSpace {
  VectorXd normal;
  double offset = 0.0;
};

/// a . x <= b with exact input coefficients.
struct RawInequality {
  Vector<Rational> a;
  Rational b;
};

struct HRep {
  int dim = 0;
  std::vector<HalfSpace> halfspaces;  // unit normals
  std::vector<RawInequality> raw;     // as read

  std::size_t size() const { return halfspaces.size(); }
};

struct Polytope {
  int dim = 0;
  std::vector<HalfSpace> facets;          // unit outward normals, index-aligned with raw
  std::vector<RawInequality> raw;
  MatrixXd vertices;                      // n x d, lexicographically sorted rows
  std::vector<std::vector<int>> incidence;  // sorted facet indices per vertex
  double diameter = 0.0;

  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  VectorXd vertex(int i) const { return vertices.row(i).transpose(); }
  /// Vertices lying on the given facet.
  std::vector<int> facet_vertices(int facet) const;
};

enum class FormMode { Normalized, Raw };

/// Affine forms q_F, one per facet.
struct FacetForms {
  std::vector<AffineForm<double>> forms;
  bool normalized = true;

  std::size_t size() const { return forms.size(); }
  /// (q_F(x))_F
  VectorXd values(const Eigen::Ref<const VectorXd>& x) const;
};

struct MetricParams {
  double gamma = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  int degP = 0;
};

/// Reads the JSON H-rep document {"dim": d, "inequalities": [{"a": [...], "b": ...}, ...]}.
HRep parse_hrep(std::string_view json_text);
HRep hrep_from_raw(int dim, std::vector<RawInequality> raw);

Polytope enumerate_vertices(const HRep& hrep);

bool check_simple(const Polytope& p);

/// h(P, u) = max over vertices of u . v
double support_value(const Polytope& p, const Eigen::Ref<const VectorXd>& u);

/// Normalized: q_F(x) = (h(P,u_F) - u_F . x) / diam(P). Raw: b_j - a_j . x.
FacetForms facet_forms(const Polytope& p, FormMode mode = FormMode::Normalized);

/// The raw forms b_j - a_j . x with exact coefficients.
std::vector<AffineForm<Rational>> raw_forms_exact(const Polytope& p);

/// Lambdas with lambda_j * raw_j = normalized_j.
VectorXd form_scalings(const Polytope& p);

/// d x d matrix of the unit normals incident to a vertex (rows).
MatrixXd vertex_normal_matrix(const Polytope& p, int vertex);

/// Pairs of vertices sharing d-1 facets (edges of a simple polytope).
std::vector<std::pair<int, int>> edges(const Polytope& p);

MetricParams metric_params(const Polytope& p, const FacetForms& forms);

/// Signed slack min_j (offset_j - u_j . x); positive inside.
double hrep_margin(const Polytope& p, const Eigen::Ref<const VectorXd>& x);

}  // namespace polyrep
