#pragma once

#include <cmath>
#include <cstdint>

#include "landau/eigensolve.hpp"
#include "landau/grid.hpp"
#include "landau/types.hpp"

namespace landau {

/// Discrete norms with cell weight w = spacing^2:
/// l2 = (sum w |u|^2)^{1/2}, l6 = (sum w |u|^6)^{1/6}, linf = max |u|.
struct NormTriple {
  double l2 = 0.0;
  double l6 = 0.0;
  double linf = 0.0;
};

template <typename Derived>
NormTriple norm_triple(const Eigen::MatrixBase<Derived>& u, double weight) {
  const Eigen::ArrayXd a2 = u.cwiseAbs2().array();
  if (a2.size() == 0) return {};
  return {std::sqrt(weight * a2.sum()), std::pow(weight * a2.cube().sum(), 1.0 / 6.0),
          std::sqrt(a2.maxCoeff())};
}

inline NormTriple norm_triple(const GridFunction& u) { return norm_triple(u.values, u.grid.weight()); }

struct ExtremalLinf {
  double ratio = 0.0;
  Point argmax = Point::Zero();
};

/// sup over span(basis) of ||u||_inf / ||u||_2, i.e. the square root of the
/// largest kernel-diagonal value. The basis need not be orthonormal; it is
/// orthonormalized through its Gram matrix first.
ExtremalLinf extremal_linf(const Basis& basis, const Grid& g);
ExtremalLinf extremal_linf(const EigenCluster& c);

struct ExtremalL6 {
  double ratio = 0.0;
  Eigen::VectorXcd coeffs;  // unit vector in the orthonormalized basis
  bool converged = true;    // every restart met its stopping rule
  // The ascent value is attained by coeffs, so it is a lower bound on the sup.
  static constexpr bool lower_bound = true;
};

struct AscentOptions {
  int restarts = 8;
  double tol = 1e-6;       // stop when |tangential gradient| <= tol * objective
  int max_iter = 5000;
  std::uint64_t seed = 0;
};

/// Gradient ascent of c -> ||sum c_j u_j||_6 on the unit sphere.
///
/// Restart 0 starts from the basis vector with the largest individual ratio,
/// the others from seeded random points. Steps follow projected gradients
/// combined into conjugate directions; every step backtracks until the
/// objective increases, so the ascent is monotone. The best restart wins,
/// ties to the lowest index.
ExtremalL6 extremal_l6(const Basis& basis, const Grid& g, const AscentOptions& opts);
ExtremalL6 extremal_l6(const EigenCluster& c, const AscentOptions& opts);

/// ||Q c||_6 for discrete-orthonormal Q (equal to the L6/L2 ratio on the sphere).
double l6_objective(const Basis& q, const Grid& g, const Eigen::VectorXcd& c);

/// Gradient of l6_objective in the real sense: the directional derivative
/// along d is Re <gradient, d>.
Eigen::VectorXcd l6_gradient(const Basis& q, const Grid& g, const Eigen::VectorXcd& c);

/// Per-level extremal ratios.
struct ExtremalRatio {
  int level = 0;
  double lambda_sq = 0.0;
  double ratio_linf = 0.0;
  double ratio_l6 = 0.0;
  double scaled_l6 = 0.0;  // lambda^{1/3} ratio_l6, or ratio_l6 at level 0
  Eigen::VectorXcd argmax_coeffs;
  bool ascent_converged = true;
};

ExtremalRatio extremal_ratios(const EigenCluster& c, int level, const AscentOptions& opts);

/// Columns of b made discrete-orthonormal through the Cholesky factor of the Gram matrix.
Basis orthonormal_columns(const Basis& b, const Grid& g);

}  // namespace landau
