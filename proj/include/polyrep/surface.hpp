#pragma once

// Zero sets of min_{j in J} p_j on a grid, for plotting the sets P_J.

#include <stdexcept>
#include <string>
#include <vector>

#include "polyrep/representation.hpp"

namespace polyrep {

class UnsupportedDim : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurfaceOptions {
  std::vector<int> faces;    // J; empty means all of 0..d-1
  int grid = 64;             // cells per axis
  double padding = 0.5;      // box inflation, in units of diam(P)
  int refine_steps = 48;     // bisection steps per crossing
};

/// min_{j in J} p_j(x)
double min_polynomial(const PolyRepresentation& rep, const std::vector<int>& faces, const Eigen::Ref<const VectorXd>& x);

/// Every grid edge whose endpoints have opposite signs contributes one point,
/// refined by bisection. In 2D these are the marching-squares contour vertices;
/// in 3D they form a point cloud of the surface. Output order is deterministic.
std::vector<VectorXd> surface_points(const PolyRepresentation& rep, const Polytope& p, const SurfaceOptions& options);

/// Grid cell edge lengths used by surface_points.
VectorXd surface_cell_size(const Polytope& p, const SurfaceOptions& options);

/// "x,y" header and one point per line.
std::string points_to_csv(const std::vector<VectorXd>& points);
/// One "v x y z" line per point.
std::string points_to_obj(const std::vector<VectorXd>& points);

}  // namespace polyrep
