#pragma once

// The d-polynomial representation of a simple polytope and its sampling verifier.
//
//   p_i(x) = sigma_{m-d+i+1}(q_1(x), ..., q_m(x))   for i = 1..d-1
//   p_0(x) = 1 - f_k(x)
//
// P = { x : p_i(x) >= 0 for all i }. The set equality is checked by sampling,
// not certified.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyrep/interpolant.hpp"
#include "polyrep/poly.hpp"
#include "polyrep/polytope.hpp"

namespace polyrep {

struct PolyRepresentation {
  int dim = 0;
  int num_facets = 0;
  FormMode mode = FormMode::Normalized;
  FacetForms sigma_forms;  // forms composed into p_1..p_{d-1}
  VertexInterpolant interpolant;
  InterpolantParams params;
  // Expanded p_1..p_{d-1} (index i-1), present when under the term cap.
  std::vector<std::optional<SparsePoly<double>>> expanded;
  // Exact expansion, raw mode only.
  std::vector<std::optional<SparsePoly<Rational>>> expanded_exact;
  std::string polytope_hash;
  std::optional<EpsilonParams> eps;

  std::size_t size() const { return static_cast<std::size_t>(dim); }
  /// sigma level used by p_i, i >= 1.
  int sigma_level(int i) const { return num_facets - dim + i + 1; }
  /// (p_0(x), ..., p_{d-1}(x)) by evaluation composition.
  VectorXd values(const Eigen::Ref<const VectorXd>& x) const;
  double value(int i, const Eigen::Ref<const VectorXd>& x) const;
  bool contains(const Eigen::Ref<const VectorXd>& x) const;
};

PolyRepresentation build_representation(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                                        FormMode mode = FormMode::Normalized, double term_cap = 1e6);

/// FNV-1a digest of the raw inequalities, hex.
std::string polytope_hash(const Polytope& p);

struct Violation {
  std::string check;  // "membership", "face", "sandwich", "cone", "gradient"
  VectorXd point;
  int index = -1;     // polynomial index (membership/face) or vertex index (cone)
  double margin = 0.0;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  double boundaryBand = 0.0;
  std::int64_t samplesInside = 0;
  std::int64_t samplesOutside = 0;
  std::int64_t samplesInBand = 0;
  std::vector<Violation> violations;
  std::vector<double> faceVanishMax;  // per i
  std::optional<bool> sandwichOk;
  std::optional<bool> coneOk;

  bool accepted() const { return violations.empty(); }
  void merge(const VerificationReport& other);
};

struct MembershipOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  double band = -1.0;        // absolute; negative means 1e-6 * diam
  double inflation = -1.0;   // bounding-box inflation; negative means 2 eps3 diam
  std::size_t max_recorded = 100;
};

/// Samples the inflated bounding box, an outer shell, vertices, facet
/// centroids, edge midpoints and vertex-cone rays; for every point farther
/// than `band` from the boundary asserts (all q_F >= 0) <=> (all p_i >= 0).
VerificationReport verify_membership(const PolyRepresentation& rep, const Polytope& p, const MembershipOptions& options);

/// i-faces as vertex index lists, for i = 0..d-1.
std::vector<std::vector<int>> faces_of_dimension(const Polytope& p, int i);

/// max |p_i| over sampled points of every i-face, i = 0..d-1.
VerificationReport verify_face_vanishing(const PolyRepresentation& rep, const Polytope& p, int samples_per_face = 50,
                                         std::uint64_t seed = 0, double tol = 1e-8);

/// P inside S_k (f_k <= 1 + 1e-9 on sampled points of P) and S_k inside P_eps
/// (sampled points with f_k <= 1 have all normalized q_F >= -eps - 1e-9).
VerificationReport verify_sandwich(const PolyRepresentation& rep, const Polytope& p, double eps, std::int64_t samples,
                                   std::uint64_t seed = 0);

/// For each vertex v: sampled x in C_v \ {v} with |x - v| in (0, diam/4]
/// satisfy f_k(x) > 1 and <grad f_k(v)/(4k^2), x - v> >= |q_v(x)|/(3 deg P) - 1e-9.
VerificationReport verify_cone_separation(const PolyRepresentation& rep, const Polytope& p, std::int64_t samples_per_vertex,
                                          std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Vertex cones and inflations.

/// q_v(x): normalized forms of the facets at v.
VectorXd vertex_forms(const Polytope& p, const FacetForms& forms, int vertex, const Eigen::Ref<const VectorXd>& x);
/// -sigma_1(q_v(x)) >= (2/3) |q_v(x)|
bool in_vertex_cone(const Polytope& p, const FacetForms& forms, int vertex, const Eigen::Ref<const VectorXd>& x);
/// The point x with q_v(x) = t, i.e. x = v - diam U_v^{-1} t.
VectorXd point_from_vertex_forms(const Polytope& p, int vertex, const Eigen::Ref<const VectorXd>& t);
/// Vertex v_eps of P_eps: q_F(v_eps) = -eps on the facets at v.
VectorXd inflated_vertex(const Polytope& p, int vertex, double eps);
/// The polytope P_eps = { q_F >= -eps } as an H-rep.
HRep inflated_hrep(const Polytope& p, double eps);

// ---------------------------------------------------------------------------
// Probes of the intermediate inclusions used by the construction.

struct ProbeResult {
  std::int64_t samples = 0;
  std::int64_t failures = 0;
  double worst = 0.0;  // most adverse slack seen
  bool ok() const { return failures == 0; }
};

/// sigma_i(q(x)) > 0 for 1 <= i <= m-d at sampled x in P_eps1.
ProbeResult probe_low_sigmas_positive(const Polytope& p, const FacetForms& forms, double eps1, std::int64_t samples,
                                      std::uint64_t seed = 0);

struct LowerBoundProbe {
  ProbeResult displayed;  // C(m-d,i)(delta^i - 2^{i-1} eps1) + C(m,i) 2^{i-1} eps1
  ProbeResult derived;    // C(m-d,i) delta^i - (C(m,i) - C(m-d,i)) 2^{i-1} eps1
};

/// sigma_i lower bounds at sampled x in P^v_{eps1,delta}.
LowerBoundProbe probe_low_sigma_bounds(const Polytope& p, const FacetForms& forms, double eps1, double delta,
                                       std::int64_t samples, std::uint64_t seed = 0);

/// Vertices of P_eps are the v_eps, q_F(v_eps) = -eps at v and >= -eps sqrt(d) alpha everywhere.
ProbeResult probe_inflated_vertices(const Polytope& p, const FacetForms& forms, double eps, double alpha);

/// Sampled x in P_eps lies in some P^v_{eps,delta}.
ProbeResult probe_cover(const Polytope& p, const FacetForms& forms, double eps, double delta, std::int64_t samples,
                        std::uint64_t seed = 0);

struct NeighborhoodProbe {
  ProbeResult inclusion;  // sigma_{m-d+2..m} >= 0 in Pi_{v,eps2} => x in P or C_v
  ProbeResult g1_positive;
  ProbeResult g2_bounded;  // g2 <= 9/4
};

/// Samples the boxes Pi_{v,eps2} around every vertex.
NeighborhoodProbe probe_vertex_neighborhoods(const Polytope& p, const FacetForms& forms, double eps2, std::int64_t samples,
                                             std::uint64_t seed = 0);

/// Sampled x in P_eps3 with sigma_{m-d+2..m} >= 0 lies in P or some C_v.
ProbeResult probe_shell_inclusion(const Polytope& p, const FacetForms& forms, double eps3, std::int64_t samples,
                                  std::uint64_t seed = 0);

}  // namespace polyrep
