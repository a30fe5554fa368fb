#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "landau/grid.hpp"
#include "landau/types.hpp"

namespace landau {

enum class PotentialKind { model_quadratic, quadratic_plus_trig, quadratic_plus_gaussian_bump, custom };

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

/// Scalar potential phi with its gradient and Laplacian.
///
/// deriv_bounds maps |alpha| in {2,3,4} to a claimed sup of |d^alpha phi|.
/// Instances are immutable after construction.
struct Potential {
  PotentialKind kind = PotentialKind::model_quadratic;
  std::vector<double> params;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> grad;
  std::function<double(const Point&)> laplacian;
  std::map<int, double> deriv_bounds;

  double operator()(const Point& x) const { return value(x); }
};

/// Shipped kinds:
///   model_quadratic                  |x|^2, no params
///   quadratic_plus_trig              |x|^2 + eps sin(x1) cos(x2), params {eps}
///   quadratic_plus_gaussian_bump     |x|^2 + eps exp(-|x|^2), params {eps}
/// eps defaults to 0 when params is empty.
Potential make_potential(PotentialKind kind, const std::vector<double>& params = {});

Potential make_custom_potential(std::function<double(const Point&)> value,
                                std::function<Point(const Point&)> grad,
                                std::function<double(const Point&)> laplacian,
                                std::map<int, double> deriv_bounds);

struct DerivativeBoundRow {
  int order = 0;
  double observed = 0.0;  // sup over nodes and multi-indices of the difference estimate
  double claimed = 0.0;
  double floor = 0.0;     // round-off allowance of the difference quotient
  bool pass = false;
};

/// Centered-difference estimates of every d^alpha phi with 2 <= |alpha| <= max_order,
/// sampled at the grid nodes. A row passes iff observed <= 1.05 * claimed + floor.
std::vector<DerivativeBoundRow> check_derivative_bounds(const Potential& p, const Grid& g,
                                                        int max_order);

/// Largest e^{-phi} over the boundary nodes of g.
double boundary_envelope(const Potential& p, const Grid& g);

/// Throws unless boundary_envelope(p, g) < 1e-10, so Dirichlet truncation of
/// the box is invisible to states at the bottom of the spectrum. Meant for
/// unscaled grids; semiclassical grids are small by construction.
void check_truncation(const Potential& p, const Grid& g);

}  // namespace landau
