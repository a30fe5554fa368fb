#pragma once

#include <cstdint>
#include <vector>

#include "landau/grid.hpp"
#include "landau/operators.hpp"
#include "landau/types.hpp"

namespace landau {

struct EigenPair {
  double value = 0.0;
  GridFunction vector;  // unit discrete L2 norm
  double residual = 0.0;  // ||op u - value u||_2, recomputed matrix-free
};

enum class InnerSolver { automatic, direct, cg };

struct EigenOptions {
  double tol = 1e-6;
  std::uint64_t seed = 0;
  // Shift for lowest_eigenpairs. It must lie below the spectrum; close to the
  // bottom converges fastest for H >= 0.
  double shift = -1e-2;
  int max_restarts = 500;
  int inner_max_iter = 10000;
  int krylov_dim = 0;  // 0 picks max(2 nev + 20, nev + 40)
  InnerSolver inner = InnerSolver::automatic;
};

/// The k smallest eigenpairs of a Hermitian op, ascending, each with
/// residual <= tol max(1, |value|). Deterministic for a given seed.
///
/// Shift-invert Krylov-Schur (thick-restart Lanczos with full
/// reorthogonalization). Inner solves use a sparse LDL^T factorization when
/// the handle can be assembled, else conjugate gradients, which also
/// verifies that op - shift is positive definite.
std::vector<EigenPair> lowest_eigenpairs(const OperatorHandle& op, int k, const EigenOptions& opts);
std::vector<EigenPair> lowest_eigenpairs(const OperatorHandle& op, int k, double tol,
                                         std::uint64_t seed);

/// The k eigenpairs nearest sigma, ascending.
std::vector<EigenPair> nearest_eigenpairs(const OperatorHandle& op, double sigma, int k,
                                          const EigenOptions& opts);

/// Number of eigenvalues of an assembled Hermitian op in [lo, hi), from the
/// inertia of LDL^T factorizations at lo and hi.
int count_in_window(const OperatorHandle& op, double lo, double hi);

/// Every eigenpair with value in [lo, hi), ascending. Requires an assembler.
std::vector<EigenPair> window_eigenpairs(const OperatorHandle& op, double lo, double hi,
                                         const EigenOptions& opts);

/// Near-degenerate eigenpairs that share a level label.
struct EigenCluster {
  int label = 0;
  std::vector<double> eigenvalues;
  std::vector<GridFunction> basis;  // discrete-orthonormal
  std::vector<double> residuals;

  int dim() const { return static_cast<int>(basis.size()); }
  double mean() const;
  double spread() const;
  Basis matrix() const;  // basis as columns
};

/// Maximal runs of sorted pairs with consecutive gaps <= cluster_tol, each
/// re-orthonormalized and labeled 0, 1, ... by increasing eigenvalue.
std::vector<EigenCluster> cluster(const std::vector<EigenPair>& pairs, double cluster_tol);

/// Bulk part of a spectral window.
///
/// On a truncated box a Landau level is accompanied by boundary-localized
/// states filling the gaps between levels. This diagonalizes the boundary
/// mass sum_{x in E} |u(x)|^2 on span(pairs), where E is the set of nodes
/// within edge_margin of the boundary, keeps directions whose boundary mass is
/// below mass_tol, and returns the Rayleigh-Ritz pairs of op on that subspace.
/// Residuals of the result are those of the Ritz vectors (bounded by the
/// window half-width, not by the solver tolerance).
EigenCluster bulk_cluster(const OperatorHandle& op, const std::vector<EigenPair>& pairs,
                          double edge_margin, double mass_tol, int label);

/// ||op u - mu u||_2 / ||u||_2.
double residual_norm(const OperatorHandle& op, const GridFunction& u, double mu);

/// Principal angles (radians, descending) between span(a) and span(b), both
/// with discrete-orthonormal columns. When a has fewer columns than b these
/// measure how far span(a) is from lying inside span(b).
Eigen::VectorXd principal_angles(const Basis& a, const Basis& b, const Grid& g);

}  // namespace landau
