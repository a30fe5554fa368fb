#include "landau/model_oracle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "landau/io.hpp"

namespace landau {

namespace {

// int_{R^2} |z|^{2k} e^{-2|z|^2} = pi k! / 2^{k+1}
double gaussian_moment(int k) {
  return std::numbers::pi * std::exp(std::lgamma(k + 1.0) - (k + 1) * std::log(2.0));
}

void check_resolved(const LadderPolynomial& p, const Grid& g) {
  const double amp = boundary_amplitude(p, g);
  if (!(amp <= 1e-8))
    throw InvalidArgument("ladder state not resolved: normalized boundary amplitude " +
                          format_double(amp) + " exceeds 1e-8");
}

GridFunction sample(const LadderPolynomial& p, const Grid& g) {
  return GridFunction::sample(g, [&p](const Point& x) { return evaluate(p, x); });
}

}  // namespace

double null_state_norm(int m) {
  if (m < 0) throw InvalidArgument("m must be >= 0");
  return std::sqrt(gaussian_moment(m));
}

double polynomial_norm(const LadderPolynomial& p) {
  // <z^a zbar^b, z^c zbar^d> is nonzero only when a - b = c - d, and then equals the moment of order a + d.
  double s = 0.0;
  for (const auto& [ab, x] : p)
    for (const auto& [cd, y] : p)
      if (ab.first - ab.second == cd.first - cd.second)
        s += (std::conj(x) * y).real() * gaussian_moment(ab.first + cd.second);
  return std::sqrt(std::max(s, 0.0));
}

LadderPolynomial raise_polynomial(const LadderPolynomial& p) {
  LadderPolynomial out;
  for (const auto& [ab, c] : p) {
    const auto [a, b] = ab;
    if (b > 0) out[{a, b - 1}] -= static_cast<double>(b) * c;
    out[{a + 1, b}] += 2.0 * c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == Complex(0.0); });
  return out;
}

Complex evaluate(const LadderPolynomial& p, const Point& x) {
  const Complex z(x[0], x[1]);
  Complex s = 0.0;
  for (const auto& [ab, c] : p) s += c * std::pow(z, ab.first) * std::pow(std::conj(z), ab.second);
  return s * std::exp(-x.squaredNorm());
}

double boundary_amplitude(const LadderPolynomial& p, const Grid& g) {
  double worst = 0.0;
  const int last = g.n() - 1;
  for (int i = 0; i < g.n(); ++i)
    for (auto [a, b] : {std::pair{i, 0}, std::pair{i, last}, std::pair{0, i}, std::pair{last, i}})
      worst = std::max(worst, std::abs(evaluate(p, Point(g.coord(a), g.coord(b)))));
  return worst / polynomial_norm(p);
}

LadderState null_state(int m, const Grid& g) {
  if (m < 0) throw InvalidArgument("m must be >= 0");
  LadderPolynomial p{{{0, m}, Complex(1.0)}};
  check_resolved(p, g);
  return {0, m, sample(p, g), null_state_norm(m), p};
}

LadderState raise(const LadderState& state, const Grid& g, const Discretization& disc) {
  LadderPolynomial p = raise_polynomial(state.poly);
  check_resolved(p, g);
  const Potential model = make_potential(PotentialKind::model_quadratic);
  const OperatorHandle dstar = build_operator(OperatorLabel::D_star, model, g, std::nullopt, std::nullopt, disc);
  return {state.level + 1, state.angular_index, dstar(state.values), polynomial_norm(p), p};
}

LadderState analytic_state(int level, int m, const Grid& g) {
  if (level < 0 || m < 0) throw InvalidArgument("level and m must be >= 0");
  LadderPolynomial p{{{0, m}, Complex(1.0)}};
  for (int i = 0; i < level; ++i) p = raise_polynomial(p);
  check_resolved(p, g);
  return {level, m, sample(p, g), polynomial_norm(p), p};
}

double orthonormalize(Basis& v, const Grid& g) {
  const double w = g.weight();
  double cond = 1.0;
  if (v.cols() > 0) {
    Eigen::MatrixXcd gram = w * v.adjoint() * v;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    cond = ev.minCoeff() > 0 ? ev.maxCoeff() / ev.minCoeff() : INFINITY;
  }
  for (Index j = 0; j < v.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < j; ++i) v.col(j) -= (w * v.col(i).dot(v.col(j))) * v.col(i);
    const double nrm = std::sqrt(w) * v.col(j).norm();
    if (!(nrm > 0.0)) throw InvalidArgument("orthonormalize: linearly dependent columns");
    v.col(j) /= nrm;
  }
  return cond;
}

Basis level_basis(int level, int basis_size, const Grid& g, LadderSource source,
                  const Discretization& disc) {
  if (level < 0) throw InvalidArgument("level must be >= 0");
  if (basis_size < 1) throw InvalidArgument("basis_size must be >= 1");
  Basis v(g.size(), basis_size);
  for (int m = 0; m < basis_size; ++m) {
    if (source == LadderSource::analytic) {
      v.col(m) = analytic_state(level, m, g).values.values;
    } else {
      LadderState s = null_state(m, g);
      for (int i = 0; i < level; ++i) s = raise(s, g, disc);
      v.col(m) = s.values.values;
    }
  }
  // Column scales differ by factorials; the conditioning check is about angles, so equilibrate first.
  for (Index j = 0; j < v.cols(); ++j) v.col(j) /= std::sqrt(g.weight()) * v.col(j).norm();
  const double cond = orthonormalize(v, g);
  if (cond > 1e3)
    throw InvalidArgument("level basis ill-conditioned (Gram condition " + std::to_string(cond) + ")");
  return v;
}

RealField kernel_diagonal(int level, int basis_size, const Grid& g, const Discretization& disc) {
  const Basis v = level_basis(level, basis_size, g, LadderSource::raised, disc);
  return v.cwiseAbs2().rowwise().sum();
}

}  // namespace landau
