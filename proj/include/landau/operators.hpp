#pragma once

#include <functional>
#include <optional>
#include <string>

#include "landau/grid.hpp"
#include "landau/potential.hpp"
#include "landau/types.hpp"

namespace landau {

enum class OperatorLabel { A, B, H, P, A_tilde_q, B_tilde_q, P_tilde_q, D, D_star, gauge, custom };

std::string to_string(OperatorLabel label);

/// Finite-difference choices shared by every operator built on a grid.
///
/// D_j = -i d_j uses the centered first difference of the given order with
/// zero values outside the grid. Centered first differences cannot see the
/// highest lattice frequency, so D*D alone has spurious near-zero modes; the
/// penalty lift * sum_j S_j^power removes them, where S_j = -(1/4) times the
/// second difference along axis j (spectrum in [0, 1]). The penalty is
/// positive semidefinite and O(spacing^(2 power)) on smooth functions.
struct Discretization {
  int stencil_order = 6;
  double doubler_lift = 40.0;
  int filter_power = 6;
};

/// A linear map on grid functions, applied matrix-free.
///
/// An optional assembler produces the same map as a sparse matrix by an
/// independent code path. Handles are immutable and cheap to copy.
class OperatorHandle {
 public:
  using ApplyFn = std::function<Field(const Field&)>;
  using AssembleFn = std::function<SparseMatrix()>;

  OperatorHandle(OperatorLabel label, const Grid& grid, bool hermitian, ApplyFn apply,
                 AssembleFn assemble = {});

  OperatorLabel label() const { return label_; }
  const Grid& grid() const { return grid_; }
  bool is_hermitian() const { return hermitian_; }
  bool has_assembler() const { return static_cast<bool>(assemble_); }

  Field apply(const Field& f) const;
  GridFunction operator()(const GridFunction& f) const;

  /// Same map, new label and Hermitian flag.
  OperatorHandle relabel(OperatorLabel label, bool hermitian) const;

 private:
  friend SparseMatrix assemble_sparse(const OperatorHandle& op);

  OperatorLabel label_;
  Grid grid_;
  bool hermitian_;
  ApplyFn apply_;
  AssembleFn assemble_;
};

/// Sparse matrix of op: its own assembler if present, else column probing.
/// Rejects grids with more than 2049 nodes per side.
SparseMatrix assemble_sparse(const OperatorHandle& op);

// Building blocks. Composition labels the result custom and non-Hermitian;
// use relabel() to assert structure that the algebra guarantees.
OperatorHandle identity(const Grid& g);
OperatorHandle multiplication(const Grid& g, const Field& m);
OperatorHandle multiplication(const Grid& g, const RealField& m);
OperatorHandle derivative(const Grid& g, int axis, int order);  // D_axis = -i d_axis
OperatorHandle doubler_penalty(const Grid& g, const Discretization& disc);

OperatorHandle operator+(const OperatorHandle& a, const OperatorHandle& b);
OperatorHandle operator-(const OperatorHandle& a, const OperatorHandle& b);
OperatorHandle operator*(Complex s, const OperatorHandle& a);
OperatorHandle operator*(const OperatorHandle& a, const OperatorHandle& b);  // a after b

/// Builds one of the operators of the magnetic Laplacian family on g.
///
///   A  = (h/2) D1 - (h^{1/2}/2) d2phi(h^{-1/2} x)     h defaults to 1
///   B  = (h/2) D2 + (h^{1/2}/2) d1phi(h^{-1/2} x)
///   D  = iA + B,  D_star = B - iA (its adjoint)
///   H  = D_star D + penalty                           unscaled, h must be absent
///   P  = D_star D + h penalty - 1                     semiclassical, h required
/// The tilde labels subtract the frozen value at q from the shifted
/// coefficients, e.g. A_tilde_q = (h/2) D1 - (h^{1/2}/2)[d2phi(h^{-1/2}(x+q)) - d2phi(h^{-1/2}q)],
/// and P_tilde_q is built from A_tilde_q, B_tilde_q like P.
/// With this construction P = h H - 1 exactly on the rescaled grid.
OperatorHandle build_operator(OperatorLabel label, const Potential& p, const Grid& g,
                              std::optional<double> h = std::nullopt,
                              std::optional<Point> q = std::nullopt,
                              const Discretization& disc = {});

/// Multiplication by exp(i sigma(x, xi)) with xi = h^{-1/2} grad phi(h^{-1/2} q)
/// and sigma(x, xi) = x2 xi1 - x1 xi2.
OperatorHandle gauge_multiplier(const Potential& p, const Grid& g, double h, const Point& q);

/// v(x) = u(x - q) on the same grid, zero where x - q leaves it.
/// q must be an integer multiple of the spacing in each coordinate.
GridFunction translate(const GridFunction& u, const Point& q);

enum class RescaleDirection { to_semiclassical, from_semiclassical };

/// Relabels samples onto the grid with extent h^{1/2} L (to_semiclassical) or
/// h^{-1/2} L (from_semiclassical) and the same node count, so u_h(x) = u(h^{-1/2} x)
/// holds node by node without interpolation.
GridFunction rescale(const GridFunction& u, double h, RescaleDirection direction);

/// As above, but checks that target is the aligned grid and throws otherwise.
GridFunction rescale(const GridFunction& u, const Grid& target, double h,
                     RescaleDirection direction);

}  // namespace landau
