#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "landau/eigensolve.hpp"
#include "landau/model_oracle.hpp"

using namespace landau;

namespace {

const Potential kModel = make_potential(PotentialKind::model_quadratic);
const double kPi = std::numbers::pi;

double wnorm(const GridFunction& u) { return std::sqrt(inner(u, u).real()); }

Discretization order(int o) {
  Discretization d;
  d.stencil_order = o;
  return d;
}

double rayleigh(const OperatorHandle& h, const GridFunction& u) {
  return (inner(u, h(u)) / inner(u, u)).real();
}

// Independent partial sum of the level-0 reproducing kernel on the diagonal:
// sum_{m < k} |zbar^m e^{-|z|^2}|^2 / ||zbar^m e^{-|z|^2}||^2.
double kernel_partial_sum(const Point& x, int k) {
  const double r2 = x.squaredNorm();
  double term = 2.0 / kPi, s = 0.0;
  for (int m = 0; m < k; ++m) {
    s += term;
    term *= 2.0 * r2 / (m + 1);
  }
  return s * std::exp(-2.0 * r2);
}

}  // namespace

TEST_CASE("analytic null state norms") {
  CHECK(null_state_norm(0) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-15));
  CHECK(null_state_norm(1) == doctest::Approx(std::sqrt(kPi / 4)).epsilon(1e-15));
  CHECK(null_state_norm(5) == doctest::Approx(std::sqrt(kPi * 120 / 64)).epsilon(1e-14));
  const Grid g(6.0, 129);
  for (int m : {0, 1, 7}) {
    const LadderState s = null_state(m, g);
    CHECK(wnorm(s.values) == doctest::Approx(s.normalization).epsilon(1e-10));
  }
}

TEST_CASE("null states with different m are orthogonal") {
  const Grid g(6.0, 129);
  const LadderState a = null_state(0, g), b = null_state(1, g), c = null_state(3, g);
  CHECK(std::abs(inner(a.values, b.values)) <= 1e-10);
  CHECK(std::abs(inner(b.values, c.values)) <= 1e-10);
}

TEST_CASE("polynomial norm agrees with quadrature for raised states") {
  const Grid g(6.0, 257);
  for (int level : {1, 2, 4})
    for (int m : {0, 3}) {
      const LadderState s = analytic_state(level, m, g);
      CHECK(wnorm(s.values) == doctest::Approx(s.normalization).epsilon(1e-9));
    }
}

TEST_CASE("raised states sit at the Landau levels") {
  const Grid g(6.0, 129);
  const OperatorHandle h = build_operator(OperatorLabel::H, kModel, g);
  const LadderState u0 = null_state(0, g);
  const LadderState u1 = raise(u0, g);
  const LadderState u2 = raise(u1, g);
  CHECK(u1.level == 1);
  CHECK(u2.level == 2);
  CHECK(rayleigh(h, u1.values) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(rayleigh(h, u2.values) == doctest::Approx(4.0).epsilon(0.02));

  // Level 1 is orthogonal to level 0: <D* u, v> = <u, D v> and D kills null states.
  for (int m : {0, 1, 2}) {
    const LadderState v = null_state(m, g);
    for (int mm : {0, 1, 2}) {
      const LadderState w = raise(null_state(mm, g), g);
      CHECK(std::abs(inner(v.values, w.values)) <= 1e-6 * wnorm(v.values) * wnorm(w.values));
    }
  }
}

TEST_CASE("grid raising matches the closed form") {
  // Grid raising carries the sixth-order stencil error, about 3e-5 at 129 nodes.
  const Grid g(6.0, 257);
  for (int level : {1, 3}) {
    LadderState s = null_state(2, g);
    for (int k = 0; k < level; ++k) s = raise(s, g);
    const LadderState a = analytic_state(level, 2, g);
    const double rel = (s.values.values - a.values.values).norm() / a.values.values.norm();
    CHECK(rel <= 1e-6);
  }
}

TEST_CASE("oracle residuals decay like spacing^2 with the second-order stencil") {
  const std::vector<int> sizes = {129, 257, 513};
  // res[size][level][m]
  std::vector<std::vector<std::vector<double>>> res;
  for (int n : sizes) {
    const Grid g(7.0, n);
    const OperatorHandle h = build_operator(OperatorLabel::H, kModel, g, std::nullopt, std::nullopt, order(2));
    std::vector<std::vector<double>> per_level(7);
    for (int m = 0; m <= 8; ++m) {
      LadderState s = null_state(m, g);
      for (int level = 0; level <= 6; ++level) {
        if (level > 0) s = raise(s, g, order(2));
        const Field r = h.apply(s.values.values) - 2.0 * level * s.values.values;
        per_level[level].push_back(r.norm() / s.values.values.norm());
      }
    }
    res.push_back(per_level);
  }
  for (int level = 0; level <= 6; ++level)
    for (int m = 0; m <= 8; ++m) {
      CAPTURE(level);
      CAPTURE(m);
      // The coarse pair is still pre-asymptotic for the higher states; the
      // finer pair must sit at 4 and the coarse one must be heading there.
      const double coarse = res[0][level][m] / res[1][level][m];
      const double fine = res[1][level][m] / res[2][level][m];
      CHECK(fine == doctest::Approx(4.0).epsilon(0.1));
      CHECK(coarse >= 3.2);
      CHECK(coarse <= 4.4);
      CHECK(std::abs(fine - 4.0) <= std::abs(coarse - 4.0) + 0.05);
    }
}

TEST_CASE("level bases are well conditioned") {
  const Grid g(7.0, 141);
  for (int level : {0, 3, 5}) {
    Basis v(g.size(), 12);
    for (int m = 0; m < 12; ++m) v.col(m) = analytic_state(level, m, g).values.values;
    v.colwise().normalize();
    CHECK(orthonormalize(v, g) <= 1e3);
    const Eigen::MatrixXcd gram = g.weight() * v.adjoint() * v;
    CHECK((gram - Eigen::MatrixXcd::Identity(12, 12)).norm() <= 1e-12);
  }
  // Raised and closed-form bases span the same space, up to the stencil error of raising.
  const Basis a = level_basis(2, 10, g, LadderSource::raised);
  const Basis b = level_basis(2, 10, g, LadderSource::analytic);
  CHECK(principal_angles(a, b, g).maxCoeff() <= 1e-3);
}

TEST_CASE("resolution guard") {
  CHECK_THROWS_AS(null_state(30, Grid(3.0, 65)), InvalidArgument);
  CHECK_NOTHROW(null_state(8, Grid(6.0, 65)));
}

TEST_CASE("level-0 kernel diagonal") {
  const Grid g(6.0, 129);
  const Index origin = g.find_node(Point::Zero());
  SUBCASE("one state gives the normalized Gaussian squared") {
    const RealField k = kernel_diagonal(0, 1, g);
    CHECK(k[origin] == doctest::Approx(2.0 / kPi).epsilon(1e-10));
    const Index x = g.find_node(Point(0.375, -0.75));
    CHECK(k[x] == doctest::Approx(2.0 / kPi * std::exp(-2 * (0.375 * 0.375 + 0.75 * 0.75))).epsilon(1e-9));
  }
  SUBCASE("twelve states plateau at 2/pi") {
    const RealField k = kernel_diagonal(0, 12, g);
    CHECK(k[origin] == doctest::Approx(2.0 / kPi).epsilon(0.01));
    double lo = 1e300, hi = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      const Point x = g.node(i);
      if (x.norm() > 1.0) continue;
      lo = std::min(lo, k[i]);
      hi = std::max(hi, k[i]);
      CHECK(k[i] == doctest::Approx(kernel_partial_sum(x, 12)).epsilon(1e-6));
    }
    CHECK((hi - lo) / hi <= 0.02);
    CHECK(lo >= 0.95 * 2 / kPi);
    CHECK(hi <= 1.05 * 2 / kPi);
  }
  SUBCASE("kernel diagonals are non-negative") {
    for (int level : {0, 1, 4}) CHECK(kernel_diagonal(level, 6, g).minCoeff() >= 0.0);
  }
}
