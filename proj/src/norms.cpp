#include "landau/norms.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Cholesky>

namespace landau {

namespace {

Eigen::VectorXcd random_unit(Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd c(k);
  for (Index i = 0; i < k; ++i) {
    const double re = nd(rng);
    c[i] = Complex(re, nd(rng));
  }
  return c / c.norm();
}

struct Ascent {
  Eigen::VectorXcd c;
  double value;
  bool converged;
};

double real_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return a.dot(b).real(); }

// Component of x tangent to the unit sphere at c.
Eigen::VectorXcd tangent(const Eigen::VectorXcd& x, const Eigen::VectorXcd& c) { return x - real_dot(c, x) * c; }

// Monotone ascent on the sphere along Polak-Ribiere conjugate directions,
// falling back to the plain projected gradient whenever the conjugate
// direction is not an ascent direction. Plain gradient steps crawl along the
// flat ridges of this objective for thousands of iterations.
Ascent ascend(const Basis& q, const Grid& g, Eigen::VectorXcd c, const AscentOptions& opts) {
  double f = l6_objective(q, g, c);
  Eigen::VectorXcd grad = tangent(l6_gradient(q, g, c), c);
  Eigen::VectorXcd dir = grad;
  double last = 1.0 / f;  // the fixed-point step c <- grad / |grad|
  for (int it = 0; it < opts.max_iter; ++it) {
    if (grad.norm() <= opts.tol * f) return {c, f, true};
    if (real_dot(grad, dir) <= 0.0) dir = grad;
    const double slope = real_dot(grad, dir);
    double step = 2.0 * last;
    bool moved = false;
    while (step > 1e-14) {
      Eigen::VectorXcd trial = c + step * dir;
      trial /= trial.norm();
      const double ft = l6_objective(q, g, trial);
      if (ft >= f + 1e-4 * step * slope && ft > f) {
        c = trial;
        f = ft;
        last = step;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      if (dir == grad) return {c, f, true};  // no ascent left at working precision
      dir = grad;
      continue;
    }
    const Eigen::VectorXcd next = tangent(l6_gradient(q, g, c), c);
    const double beta = std::max(0.0, real_dot(next, next - tangent(grad, c)) / grad.squaredNorm());
    dir = next + beta * tangent(dir, c);
    grad = next;
  }
  return {c, f, false};
}

}  // namespace

Basis orthonormal_columns(const Basis& b, const Grid& g) {
  if (b.cols() == 0) throw InvalidArgument("empty basis");
  const Eigen::MatrixXcd gram = g.weight() * b.adjoint() * b;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) throw InvalidArgument("basis columns are linearly dependent");
  // Q = B L^{-H} has Q^H Q w = L^{-1} G L^{-H} = I.
  return llt.matrixU().solve<Eigen::OnTheRight>(b);
}

ExtremalLinf extremal_linf(const Basis& basis, const Grid& g) {
  const Basis q = orthonormal_columns(basis, g);
  const RealField kd = q.cwiseAbs2().rowwise().sum();
  Index arg = 0;
  const double mx = kd.maxCoeff(&arg);
  return {std::sqrt(mx), g.node(arg)};
}

ExtremalLinf extremal_linf(const EigenCluster& c) {
  if (c.basis.empty()) throw InvalidArgument("extremal_linf: empty cluster");
  return extremal_linf(c.matrix(), c.basis.front().grid);
}

double l6_objective(const Basis& q, const Grid& g, const Eigen::VectorXcd& c) {
  return norm_triple(q * c, g.weight()).l6;
}

Eigen::VectorXcd l6_gradient(const Basis& q, const Grid& g, const Eigen::VectorXcd& c) {
  const Field u = q * c;
  const Eigen::ArrayXd a2 = u.cwiseAbs2().array();
  const double s = g.weight() * a2.cube().sum();
  const Field v = (g.weight() * a2.square()).matrix().cast<Complex>().cwiseProduct(u);
  return std::pow(s, -5.0 / 6.0) * (q.adjoint() * v);
}

ExtremalL6 extremal_l6(const Basis& basis, const Grid& g, const AscentOptions& opts) {
  if (opts.restarts < 8) throw InvalidArgument("sweep.restarts must be >= 8");
  const Basis q = orthonormal_columns(basis, g);
  const Index k = q.cols();

  Index best_col = 0;
  double best_single = -1.0;
  for (Index j = 0; j < k; ++j) {
    const double r = l6_objective(q, g, Eigen::VectorXcd::Unit(k, j));
    if (r > best_single) {
      best_single = r;
      best_col = j;
    }
  }

  ExtremalL6 out;
  out.ratio = -1.0;
  std::mt19937_64 rng(opts.seed);
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::VectorXcd start = r == 0 ? Eigen::VectorXcd::Unit(k, best_col) : random_unit(k, rng);
    const Ascent a = ascend(q, g, start, opts);
    out.converged = out.converged && a.converged;
    if (a.value > out.ratio) {
      out.ratio = a.value;
      out.coeffs = a.c;
    }
  }
  return out;
}

ExtremalL6 extremal_l6(const EigenCluster& c, const AscentOptions& opts) {
  if (c.basis.empty()) throw InvalidArgument("extremal_l6: empty cluster");
  return extremal_l6(c.matrix(), c.basis.front().grid, opts);
}

ExtremalRatio extremal_ratios(const EigenCluster& c, int level, const AscentOptions& opts) {
  ExtremalRatio r;
  r.level = level;
  r.lambda_sq = c.mean();
  r.ratio_linf = extremal_linf(c).ratio;
  const ExtremalL6 l6 = extremal_l6(c, opts);
  r.ratio_l6 = l6.ratio;
  r.argmax_coeffs = l6.coeffs;
  r.ascent_converged = l6.converged;
  r.scaled_l6 = level == 0 ? l6.ratio : std::cbrt(std::sqrt(std::max(r.lambda_sq, 0.0))) * l6.ratio;
  return r;
}

}  // namespace landau
