#pragma once

#include <map>
#include <utility>

#include "landau/grid.hpp"
#include "landau/operators.hpp"
#include "landau/types.hpp"

namespace landau {

/// p(z, zbar) = sum c_ab z^a zbar^b, standing for the continuum state p e^{-|z|^2}.
using LadderPolynomial = std::map<std::pair<int, int>, Complex>;

/// A model eigenfunction at Landau level `level` (eigenvalue 2 level).
///
/// values holds unnormalized samples; normalization is the analytic L2 norm
/// of the continuum function. Level 0 values are sampled in closed form,
/// higher levels come from the grid creation operator.
struct LadderState {
  int level = 0;
  int angular_index = 0;
  GridFunction values;
  double normalization = 0.0;
  LadderPolynomial poly;
};

/// Analytic ||zbar^m e^{-|z|^2}||_2 = sqrt(pi m! / 2^{m+1}).
double null_state_norm(int m);

/// Exact L2 norm of p e^{-|z|^2} from the Gaussian moments.
double polynomial_norm(const LadderPolynomial& p);

/// Creation operator -d_zbar + z acting on p e^{-|z|^2}.
LadderPolynomial raise_polynomial(const LadderPolynomial& p);

Complex evaluate(const LadderPolynomial& p, const Point& x);

/// max over boundary nodes of |p e^{-|z|^2}| divided by its L2 norm.
double boundary_amplitude(const LadderPolynomial& p, const Grid& g);

/// zbar^m e^{-|z|^2}. Throws unless boundary_amplitude <= 1e-8.
LadderState null_state(int m, const Grid& g);

/// Applies the grid D_star (built with disc) to the state; level goes up by one.
LadderState raise(const LadderState& state, const Grid& g, const Discretization& disc = {});

/// The level-n state from m by sampling the closed form, without any grid operator.
LadderState analytic_state(int level, int m, const Grid& g);

enum class LadderSource { raised, analytic };

/// Discrete-orthonormal basis (columns, weighted inner product) of the level
/// spanned by m = 0..basis_size-1, by modified Gram-Schmidt with one
/// reorthogonalization pass. Throws if the Gram matrix condition number
/// exceeds 1e3.
Basis level_basis(int level, int basis_size, const Grid& g, LadderSource source = LadderSource::raised,
                  const Discretization& disc = {});

/// x -> sum_j |u_j(x)|^2 over level_basis(level, basis_size, g).
RealField kernel_diagonal(int level, int basis_size, const Grid& g, const Discretization& disc = {});

/// Orthonormalizes the columns of v in the weighted inner product of g.
/// Returns the condition number of the Gram matrix of the input.
double orthonormalize(Basis& v, const Grid& g);

}  // namespace landau
