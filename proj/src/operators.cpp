#include "landau/operators.hpp"

#include <cmath>
#include <vector>

namespace landau {

namespace {

const Complex kI(0.0, 1.0);

// Centered first-difference weights c_s for offsets s = 1..r: f' ~ sum c_s (f_{+s} - f_{-s}) / d.
std::vector<double> first_difference_weights(int order) {
  switch (order) {
    case 2: return {1.0 / 2};
    case 4: return {2.0 / 3, -1.0 / 12};
    case 6: return {3.0 / 4, -3.0 / 20, 1.0 / 60};
    default: throw InvalidArgument("stencil order must be 2, 4 or 6");
  }
}

SparseMatrix from_triplets(Index n, const std::vector<Eigen::Triplet<Complex>>& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Position along the axis and stride of the axis in the flat layout.
struct AxisWalk {
  int n;
  Index stride;
  int pos(Index k) const { return static_cast<int>(stride == 1 ? k % n : k / n); }
};

AxisWalk walk(const Grid& g, int axis) {
  if (axis != 0 && axis != 1) throw InvalidArgument("axis must be 0 or 1");
  return {g.n(), axis == 0 ? static_cast<Index>(g.n()) : 1};
}

// S f = (2 f - f_{+1} - f_{-1}) / 4 along one axis, zero outside.
Field apply_s(const AxisWalk& w, const Field& f) {
  Field out(f.size());
  for (Index k = 0; k < f.size(); ++k) {
    const int i = w.pos(k);
    Complex s = 2.0 * f[k];
    if (i + 1 < w.n) s -= f[k + w.stride];
    if (i > 0) s -= f[k - w.stride];
    out[k] = 0.25 * s;
  }
  return out;
}

SparseMatrix assemble_s(const Grid& g, const AxisWalk& w) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (Index k = 0; k < g.size(); ++k) {
    const int i = w.pos(k);
    t.emplace_back(k, k, 0.5);
    if (i + 1 < w.n) t.emplace_back(k, k + w.stride, -0.25);
    if (i > 0) t.emplace_back(k, k - w.stride, -0.25);
  }
  return from_triplets(g.size(), t);
}

}  // namespace

std::string to_string(OperatorLabel label) {
  switch (label) {
    case OperatorLabel::A: return "A";
    case OperatorLabel::B: return "B";
    case OperatorLabel::H: return "H";
    case OperatorLabel::P: return "P";
    case OperatorLabel::A_tilde_q: return "A_tilde_q";
    case OperatorLabel::B_tilde_q: return "B_tilde_q";
    case OperatorLabel::P_tilde_q: return "P_tilde_q";
    case OperatorLabel::D: return "D";
    case OperatorLabel::D_star: return "D_star";
    case OperatorLabel::gauge: return "gauge";
    case OperatorLabel::custom: return "custom";
  }
  return "custom";
}

OperatorHandle::OperatorHandle(OperatorLabel label, const Grid& grid, bool hermitian,
                               ApplyFn apply, AssembleFn assemble)
    : label_(label), grid_(grid), hermitian_(hermitian), apply_(std::move(apply)),
      assemble_(std::move(assemble)) {
  if (!apply_) throw InvalidArgument("operator handle needs an apply function");
}

Field OperatorHandle::apply(const Field& f) const {
  if (f.size() != grid_.size()) throw InvalidArgument("operator applied to a vector of wrong length");
  return apply_(f);
}

GridFunction OperatorHandle::operator()(const GridFunction& f) const {
  if (!(f.grid == grid_)) throw InvalidArgument("operator applied to a function on another grid");
  return GridFunction(grid_, apply_(f.values));
}

OperatorHandle OperatorHandle::relabel(OperatorLabel label, bool hermitian) const {
  return OperatorHandle(label, grid_, hermitian, apply_, assemble_);
}

SparseMatrix assemble_sparse(const OperatorHandle& op) {
  if (op.grid().n() > 2049) throw InvalidArgument("assemble_sparse: n_per_side exceeds 2049");
  if (op.assemble_) {
    SparseMatrix m = op.assemble_();
    m.prune(Complex(0.0));
    m.makeCompressed();
    return m;
  }
  const Index n = op.grid().size();
  std::vector<Eigen::Triplet<Complex>> t;
  Field e = Field::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Field col = op.apply_(e);
    for (Index i = 0; i < n; ++i)
      if (col[i] != Complex(0.0)) t.emplace_back(i, j, col[i]);
    e[j] = 0.0;
  }
  SparseMatrix m = from_triplets(n, t);
  m.makeCompressed();
  return m;
}

OperatorHandle identity(const Grid& g) {
  return OperatorHandle(
      OperatorLabel::custom, g, true, [](const Field& f) { return f; },
      [g] {
        SparseMatrix m(g.size(), g.size());
        m.setIdentity();
        return m;
      });
}

OperatorHandle multiplication(const Grid& g, const Field& m) {
  if (m.size() != g.size()) throw InvalidArgument("multiplier length does not match grid");
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0;
  return OperatorHandle(
      OperatorLabel::custom, g, real, [m](const Field& f) -> Field { return m.cwiseProduct(f); },
      [g, m] {
        std::vector<Eigen::Triplet<Complex>> t;
        for (Index k = 0; k < g.size(); ++k) t.emplace_back(k, k, m[k]);
        return from_triplets(g.size(), t);
      });
}

OperatorHandle multiplication(const Grid& g, const RealField& m) {
  return multiplication(g, Field(m.cast<Complex>()));
}

OperatorHandle derivative(const Grid& g, int axis, int order) {
  const auto c = first_difference_weights(order);
  const AxisWalk w = walk(g, axis);
  const double d = g.spacing();
  auto apply = [c, w, d](const Field& f) {
    Field out(f.size());
    for (Index k = 0; k < f.size(); ++k) {
      const int i = w.pos(k);
      Complex s = 0.0;
      for (int j = 1; j <= static_cast<int>(c.size()); ++j) {
        const Complex fp = i + j < w.n ? f[k + j * w.stride] : Complex(0.0);
        const Complex fm = i - j >= 0 ? f[k - j * w.stride] : Complex(0.0);
        s += c[j - 1] * (fp - fm);
      }
      out[k] = -kI * s / d;
    }
    return out;
  };
  auto assemble = [g, c, w, d] {
    std::vector<Eigen::Triplet<Complex>> t;
    for (Index k = 0; k < g.size(); ++k) {
      const int i = w.pos(k);
      for (int j = 1; j <= static_cast<int>(c.size()); ++j) {
        if (i + j < w.n) t.emplace_back(k, k + j * w.stride, -kI * c[j - 1] / d);
        if (i - j >= 0) t.emplace_back(k, k - j * w.stride, kI * c[j - 1] / d);
      }
    }
    return from_triplets(g.size(), t);
  };
  return OperatorHandle(OperatorLabel::custom, g, true, apply, assemble);
}

OperatorHandle doubler_penalty(const Grid& g, const Discretization& disc) {
  if (disc.filter_power < 0) throw InvalidArgument("filter_power must be >= 0");
  if (!(disc.doubler_lift >= 0.0)) throw InvalidArgument("doubler_lift must be >= 0");
  const int p = disc.filter_power;
  const double lift = disc.doubler_lift;
  if (p == 0 || lift == 0.0) {
    return OperatorHandle(
        OperatorLabel::custom, g, true, [](const Field& f) -> Field { return Field::Zero(f.size()); },
        [g] { return SparseMatrix(g.size(), g.size()); });
  }
  const AxisWalk w0 = walk(g, 0), w1 = walk(g, 1);
  auto apply = [p, lift, w0, w1](const Field& f) {
    Field a = f, b = f;
    for (int i = 0; i < p; ++i) {
      a = apply_s(w0, a);
      b = apply_s(w1, b);
    }
    return Field(lift * (a + b));
  };
  auto assemble = [g, p, lift, w0, w1] {
    const SparseMatrix s0 = assemble_s(g, w0), s1 = assemble_s(g, w1);
    SparseMatrix a = s0, b = s1;
    for (int i = 1; i < p; ++i) {
      a = SparseMatrix(a * s0);
      b = SparseMatrix(b * s1);
    }
    return SparseMatrix(Complex(lift) * (a + b));
  };
  return OperatorHandle(OperatorLabel::custom, g, true, apply, assemble);
}

namespace {

OperatorHandle::AssembleFn combine(const OperatorHandle& a, const OperatorHandle& b,
                                   SparseMatrix (*op)(const SparseMatrix&, const SparseMatrix&)) {
  if (!a.has_assembler() || !b.has_assembler()) return {};
  return [a, b, op] { return op(assemble_sparse(a), assemble_sparse(b)); };
}

void same_grid(const OperatorHandle& a, const OperatorHandle& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("operators live on different grids");
}

}  // namespace

OperatorHandle operator+(const OperatorHandle& a, const OperatorHandle& b) {
  same_grid(a, b);
  return OperatorHandle(
      OperatorLabel::custom, a.grid(), false,
      [a, b](const Field& f) -> Field { return a.apply(f) + b.apply(f); },
      combine(a, b, [](const SparseMatrix& x, const SparseMatrix& y) { return SparseMatrix(x + y); }));
}

OperatorHandle operator-(const OperatorHandle& a, const OperatorHandle& b) {
  same_grid(a, b);
  return OperatorHandle(
      OperatorLabel::custom, a.grid(), false,
      [a, b](const Field& f) -> Field { return a.apply(f) - b.apply(f); },
      combine(a, b, [](const SparseMatrix& x, const SparseMatrix& y) { return SparseMatrix(x - y); }));
}

OperatorHandle operator*(Complex s, const OperatorHandle& a) {
  OperatorHandle::AssembleFn assemble;
  if (a.has_assembler()) assemble = [s, a] { return SparseMatrix(s * assemble_sparse(a)); };
  return OperatorHandle(
      OperatorLabel::custom, a.grid(), false,
      [s, a](const Field& f) -> Field { return s * a.apply(f); }, assemble);
}

OperatorHandle operator*(const OperatorHandle& a, const OperatorHandle& b) {
  same_grid(a, b);
  return OperatorHandle(
      OperatorLabel::custom, a.grid(), false,
      [a, b](const Field& f) { return a.apply(b.apply(f)); },
      combine(a, b, [](const SparseMatrix& x, const SparseMatrix& y) { return SparseMatrix(x * y); }));
}

OperatorHandle build_operator(OperatorLabel label, const Potential& p, const Grid& g,
                              std::optional<double> h, std::optional<Point> q,
                              const Discretization& disc) {
  using L = OperatorLabel;
  const bool tilde = label == L::A_tilde_q || label == L::B_tilde_q || label == L::P_tilde_q;
  const bool semiclassical = tilde || label == L::P;
  if (label == L::custom || label == L::gauge)
    throw InvalidArgument("build_operator: use gauge_multiplier or the building blocks for " +
                          to_string(label));
  if (h && !(*h > 0.0)) throw InvalidArgument("h must be > 0");
  if (semiclassical && !h) throw InvalidArgument(to_string(label) + " requires h");
  if (label == L::H && h) throw InvalidArgument("H is unscaled; use P for a semiclassical h");
  if (tilde && !q) throw InvalidArgument(to_string(label) + " requires q");
  if (!tilde && q) throw InvalidArgument(to_string(label) + " takes no q");

  const double hh = h.value_or(1.0);
  const double s = std::sqrt(hh);
  const Point shift = q.value_or(Point::Zero());
  const Point frozen = tilde ? p.grad(shift / s) : Point::Zero();

  // Magnetic coefficients (s/2) d_j phi((x + q)/s), minus the frozen value for tilde labels.
  RealField m1(g.size()), m2(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const Point gr = p.grad((g.node(k) + shift) / s);
    m1[k] = 0.5 * s * (gr[0] - frozen[0]);
    m2[k] = 0.5 * s * (gr[1] - frozen[1]);
  }

  const OperatorHandle a =
      (Complex(hh / 2) * derivative(g, 0, disc.stencil_order) - multiplication(g, m2))
          .relabel(tilde ? L::A_tilde_q : L::A, true);
  const OperatorHandle b =
      (Complex(hh / 2) * derivative(g, 1, disc.stencil_order) + multiplication(g, m1))
          .relabel(tilde ? L::B_tilde_q : L::B, true);
  if (label == L::A || label == L::A_tilde_q) return a;
  if (label == L::B || label == L::B_tilde_q) return b;

  const OperatorHandle d = (kI * a + b).relabel(L::D, false);
  const OperatorHandle dstar = (b - kI * a).relabel(L::D_star, false);
  if (label == L::D) return d;
  if (label == L::D_star) return dstar;

  const OperatorHandle w = Complex(hh) * doubler_penalty(g, disc);
  if (label == L::H) return (dstar * d + w).relabel(L::H, true);
  return (dstar * d + w - identity(g)).relabel(label, true);
}

OperatorHandle gauge_multiplier(const Potential& p, const Grid& g, double h, const Point& q) {
  if (!(h > 0.0)) throw InvalidArgument("h must be > 0");
  const double s = std::sqrt(h);
  const Point xi = p.grad(q / s) / s;
  Field m(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const Point x = g.node(k);
    m[k] = std::exp(kI * (x[1] * xi[0] - x[0] * xi[1]));
  }
  return multiplication(g, m).relabel(OperatorLabel::gauge, false);
}

GridFunction translate(const GridFunction& u, const Point& q) {
  const Grid& g = u.grid;
  int off[2];
  for (int j = 0; j < 2; ++j) {
    const double t = q[j] / g.spacing();
    if (std::abs(t - std::round(t)) > 1e-9)
      throw InvalidArgument("translate: shift is not a multiple of the grid spacing");
    off[j] = static_cast<int>(std::round(t));
  }
  GridFunction v(g);
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int j1 = i1 - off[0];
    if (j1 < 0 || j1 >= g.n()) continue;
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const int j2 = i2 - off[1];
      if (j2 < 0 || j2 >= g.n()) continue;
      v.values[g.index(i1, i2)] = u.values[g.index(j1, j2)];
    }
  }
  return v;
}

GridFunction rescale(const GridFunction& u, double h, RescaleDirection direction) {
  if (!(h > 0.0)) throw InvalidArgument("rescale: h must be > 0");
  const double factor = direction == RescaleDirection::to_semiclassical ? std::sqrt(h) : 1.0 / std::sqrt(h);
  return GridFunction(Grid(factor * u.grid.extent(), u.grid.n()), u.values);
}

GridFunction rescale(const GridFunction& u, const Grid& target, double h,
                     RescaleDirection direction) {
  GridFunction v = rescale(u, h, direction);
  const double rel = std::abs(target.extent() - v.grid.extent()) / v.grid.extent();
  if (target.n() != v.grid.n() || rel > 1e-12)
    throw InvalidArgument("rescale: target grid nodes do not align with the source nodes");
  v.grid = target;
  return v;
}

}  // namespace landau
