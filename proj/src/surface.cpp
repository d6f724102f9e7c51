#include "polyrep/surface.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "polyrep/symmetric.hpp"

namespace polyrep {

namespace {

std::vector<int> resolve_faces(const PolyRepresentation& rep, const std::vector<int>& faces) {
  if (faces.empty()) {
    std::vector<int> all(static_cast<std::size_t>(rep.dim));
    for (int j = 0; j < rep.dim; ++j) all[static_cast<std::size_t>(j)] = j;
    return all;
  }
  for (int j : faces) {
    if (j < 0 || j >= rep.dim) throw std::invalid_argument("polynomial index " + std::to_string(j) + " out of range");
  }
  return faces;
}

void box(const Polytope& p, const SurfaceOptions& options, VectorXd& lo, VectorXd& hi) {
  const VectorXd pad = VectorXd::Constant(p.dim, options.padding * p.diameter);
  lo = p.vertices.colwise().minCoeff().transpose() - pad;
  hi = p.vertices.colwise().maxCoeff().transpose() + pad;
}

std::string format_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

double min_polynomial(const PolyRepresentation& rep, const std::vector<int>& faces, const Eigen::Ref<const VectorXd>& x) {
  double result = std::numeric_limits<double>::infinity();
  bool need_sigma = false;
  for (int j : faces) need_sigma = need_sigma || j > 0;
  VectorXd sigma;
  if (need_sigma) sigma = elem_sym_all(rep.sigma_forms.values(x));
  for (int j : faces) result = std::min(result, j == 0 ? rep.value(0, x) : sigma(rep.sigma_level(j)));
  return result;
}

VectorXd surface_cell_size(const Polytope& p, const SurfaceOptions& options) {
  VectorXd lo, hi;
  box(p, options, lo, hi);
  return (hi - lo) / static_cast<double>(options.grid);
}

std::vector<VectorXd> surface_points(const PolyRepresentation& rep, const Polytope& p, const SurfaceOptions& options) {
  const int d = p.dim;
  if (d != 2 && d != 3) throw UnsupportedDim("surface output supports d = 2 or 3, got d = " + std::to_string(d));
  if (options.grid < 1) throw std::invalid_argument("grid must be positive");
  const std::vector<int> faces = resolve_faces(rep, options.faces);

  VectorXd lo, hi;
  box(p, options, lo, hi);
  const VectorXd step = (hi - lo) / static_cast<double>(options.grid);
  const int side = options.grid + 1;
  const int nz = d == 3 ? side : 1;

  auto node = [&](int i, int j, int l) {
    VectorXd x(d);
    x(0) = lo(0) + i * step(0);
    x(1) = lo(1) + j * step(1);
    if (d == 3) x(2) = lo(2) + l * step(2);
    return x;
  };
  auto flat = [&](int i, int j, int l) { return (static_cast<std::size_t>(l) * side + j) * side + i; };

  std::vector<double> values(static_cast<std::size_t>(side) * side * nz);
  for (int l = 0; l < nz; ++l) {
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) values[flat(i, j, l)] = min_polynomial(rep, faces, node(i, j, l));
    }
  }

  std::vector<VectorXd> points;
  auto crossing = [&](int i, int j, int l, int axis) {
    int i2 = i, j2 = j, l2 = l;
    (axis == 0 ? i2 : axis == 1 ? j2 : l2) += 1;
    const double g_a = values[flat(i, j, l)];
    const double g_b = values[flat(i2, j2, l2)];
    if ((g_a >= 0.0) == (g_b >= 0.0)) return;
    VectorXd a = node(i, j, l);
    VectorXd b = node(i2, j2, l2);
    const bool a_inside = g_a >= 0.0;
    for (int s = 0; s < options.refine_steps; ++s) {
      const VectorXd mid = 0.5 * (a + b);
      if ((min_polynomial(rep, faces, mid) >= 0.0) == a_inside) {
        a = mid;
      } else {
        b = mid;
      }
    }
    points.push_back(0.5 * (a + b));
  };
  for (int l = 0; l < nz; ++l) {
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        if (i + 1 < side) crossing(i, j, l, 0);
        if (j + 1 < side) crossing(i, j, l, 1);
        if (d == 3 && l + 1 < side) crossing(i, j, l, 2);
      }
    }
  }
  return points;
}

std::string points_to_csv(const std::vector<VectorXd>& points) {
  std::string out = "x,y\n";
  for (const auto& x : points) out += format_number(x(0)) + "," + format_number(x(1)) + "\n";
  return out;
}

std::string points_to_obj(const std::vector<VectorXd>& points) {
  std::string out;
  for (const auto& x : points) {
    out += "v " + format_number(x(0)) + " " + format_number(x(1)) + " " + format_number(x(2)) + "\n";
  }
  return out;
}

}  // namespace polyrep
