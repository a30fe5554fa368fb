#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "landau/io.hpp"
#include "landau/model_oracle.hpp"
#include "landau/verify.hpp"

using namespace landau;

namespace {

const Potential kModel = make_potential(PotentialKind::model_quadratic);

double wnorm(const Field& u, const Grid& g) { return std::sqrt(g.weight()) * u.norm(); }

Discretization order(int o) {
  Discretization d;
  d.stencil_order = o;
  return d;
}

EigenCluster one_vector(const OperatorHandle& op, const GridFunction& u) {
  EigenCluster c;
  c.eigenvalues.push_back((inner(u, op(u)) / inner(u, u)).real());
  c.basis.push_back(u);
  c.residuals.push_back(0.0);
  return c;
}

// Level-n analytic state (m = 0) rescaled to the semiclassical grid for h = 1/(2n),
// where it is an eigenfunction of P up to stencil error.
GridFunction semiclassical_state(int level, const Grid& g) {
  const double h = 1.0 / (2.0 * level);
  GridFunction u = rescale(analytic_state(level, 0, g).values, h, RescaleDirection::to_semiclassical);
  u.values /= wnorm(u.values, u.grid);
  return u;
}

bool all_pass(const std::vector<LemmaRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

}  // namespace

TEST_CASE("cutoff profile") {
  CHECK(cutoff_profile(0.0) == 1.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(2.0) == 0.0);
  CHECK(cutoff_profile(3.5) == 0.0);
  double prev = 1.0;
  for (double r = 0.0; r <= 2.5; r += 0.01) {
    const double v = cutoff_profile(r);
    CHECK(v >= 0.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("cutoff functions on a grid") {
  const Grid g(6.0, 97);
  const Point q(1.0, -0.5);
  const Cutoff c = make_cutoff(q, g);
  CHECK(c.beta[g.find_node(q)] == 1.0);
  CHECK(c.beta[g.find_node(q + Point(2.5, 0.0))] == 0.0);
  CHECK(c.beta_tilde[g.find_node(q + Point(0.0, 1.875))] == 1.0);
  // beta_tilde is 1 wherever beta is not 0.
  for (Index k = 0; k < g.size(); ++k)
    if (c.beta[k] > 0.0) CHECK(c.beta_tilde[k] == 1.0);

  // Independent estimate of sup |psi'| by centered differences.
  double slope = 0.0;
  for (double r = 1.0; r <= 2.0; r += 1e-4)
    slope = std::max(slope, std::abs(cutoff_profile(r + 1e-6) - cutoff_profile(r - 1e-6)) / 2e-6);
  CHECK(c.sup_d1 == doctest::Approx(slope).epsilon(1e-3));
  CHECK(c.sup_d2 == doctest::Approx(slope).epsilon(1e-3));

  const Cutoff sq = make_cutoff(q, g, 2);
  for (Index k = 0; k < g.size(); ++k) CHECK(sq.beta[k] == doctest::Approx(c.beta[k] * c.beta[k]));
  CHECK_THROWS_AS(make_cutoff(q, g, 3), InvalidArgument);
}

TEST_CASE("energy identity for the model ground state") {
  const Grid g(6.0, 65);
  const OperatorHandle h = build_operator(OperatorLabel::H, kModel, g);
  const auto pairs = lowest_eigenpairs(h, 1, 1e-8, 0);
  EigenCluster c;
  c.eigenvalues.push_back(pairs[0].value);
  c.basis.push_back(pairs[0].vector);
  c.residuals.push_back(pairs[0].residual);
  const auto rows = check_energy_lemma(kModel, g, c, std::nullopt);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].pass);

  // Direct evaluation: Lap phi / 4 = 1 and lambda^2 = 0 give ||Au||^2 + ||Bu||^2 = ||u||^2.
  const Field& u = pairs[0].vector.values;
  const double a = wnorm(build_operator(OperatorLabel::A, kModel, g).apply(u), g);
  const double b = wnorm(build_operator(OperatorLabel::B, kModel, g).apply(u), g);
  CHECK(std::abs(a * a + b * b - 1.0) <= 1e-3);
  CHECK(std::abs(a * a + b * b - 1.0 - pairs[0].value) <= 1e-3);
}

TEST_CASE("energy identity at the second level") {
  const Grid g(6.0, 97);
  const OperatorHandle h = build_operator(OperatorLabel::H, kModel, g);
  const auto window = window_eigenpairs(h, 3.5, 4.5, EigenOptions{});
  const EigenCluster bulk = bulk_cluster(h, window, 2.0, 1e-4, 2);
  REQUIRE(bulk.dim() > 0);
  CHECK(all_pass(check_energy_lemma(kModel, g, bulk, std::nullopt)));
  const OperatorHandle a = build_operator(OperatorLabel::A, kModel, g);
  const OperatorHandle b = build_operator(OperatorLabel::B, kModel, g);
  for (const auto& u : bulk.basis) {
    const double s = std::pow(wnorm(a.apply(u.values), g), 2) + std::pow(wnorm(b.apply(u.values), g), 2);
    CHECK(s == doctest::Approx(5.0).epsilon(0.02));
  }
}

TEST_CASE("energy lemma rejects bad clusters") {
  const Grid g(6.0, 33);
  const OperatorHandle h = build_operator(OperatorLabel::H, kModel, g);
  EigenCluster zero;
  zero.eigenvalues.push_back(0.0);
  zero.basis.emplace_back(g);
  zero.residuals.push_back(0.0);
  CHECK_THROWS_WITH_AS(check_energy_lemma(kModel, g, zero, std::nullopt), doctest::Contains("zero vector"),
                       InvalidArgument);
  EigenCluster wrong = one_vector(h, null_state(0, g).values);
  wrong.eigenvalues[0] = 2.0;
  CHECK_THROWS_AS(check_energy_lemma(kModel, g, wrong, std::nullopt), InvalidArgument);
  CHECK_THROWS_AS(check_energy_lemma(kModel, g, EigenCluster{}, std::nullopt), InvalidArgument);
}

TEST_CASE("semiclassical energy bounds") {
  const Grid g(9.0, 181);
  const GridFunction u = semiclassical_state(1, g);
  const OperatorHandle p = build_operator(OperatorLabel::P, kModel, u.grid, 0.5);
  const auto rows = check_energy_lemma(kModel, u.grid, one_vector(p, u), 0.5);
  REQUIRE(rows.size() == 2);
  CHECK(all_pass(rows));
  // Model: sup |Lap phi| = 4 after scaling, so the bound is (h + 1)^{1/2}.
  CHECK(rows[0].rhs == doctest::Approx(std::sqrt(1.5) + 1e-3).epsilon(1e-9));
}

TEST_CASE("cutoff lemma") {
  const Grid g(9.0, 181);
  const GridFunction u = semiclassical_state(1, g);
  SUBCASE("at the origin and far out") {
    const auto rows = check_cutoff_lemma(kModel, u.grid, u, 0.5, {Point::Zero(), Point(4.0, 4.0)});
    CHECK(all_pass(rows));
    // beta_q u vanishes to round-off when q is far from the support of u.
    CHECK(rows[1].lhs <= 1e-8);
  }
  SUBCASE("squared cutoff") {
    CHECK(all_pass(check_cutoff_lemma(kModel, u.grid, u, 0.5, {Point::Zero()}, 2)));
  }
  SUBCASE("centers too close to the boundary are rejected") {
    CHECK_THROWS_AS(check_cutoff_lemma(kModel, u.grid, u, 0.5, {Point(5.0, 0.0)}), InvalidArgument);
  }
  SUBCASE("eigenspace sup over a level") {
    Basis b(g.size(), 3);
    for (int m = 0; m < 3; ++m)
      b.col(m) = rescale(analytic_state(1, m, g).values, 0.5, RescaleDirection::to_semiclassical).values;
    const LemmaRow r = check_cutoff_lemma_sup(kModel, u.grid, b, 0.5, Point::Zero());
    CHECK(r.pass);
    CHECK(r.lhs >= check_cutoff_lemma(kModel, u.grid, u, 0.5, {Point::Zero()})[0].lhs * (1 - 1e-9));
  }
}

TEST_CASE("cutoff rate study") {
  // The sup over a level only sees the O(h) commutator once the basis reaches
  // the transition zone of the cutoff, so the slope falls as the basis grows.
  const Grid g(12.0, 241);
  const RateStudy few = cutoff_rate_study(g, {0.5, 0.25, 0.125}, 6);
  const RateStudy many = cutoff_rate_study(g, {0.5, 0.25, 0.125}, 40);
  CHECK(many.h.size() == 3);
  CHECK(all_pass(many.rows));
  CHECK(few.slope > many.slope);
  for (size_t i = 0; i < 3; ++i) CHECK(many.rows[i].lhs >= few.rows[i].lhs);
  // Between the two smallest h the slope is 1; the h^2 part of the commutator
  // still shows at h = 1/2 and steepens the three-point fit.
  CHECK(std::abs(many.fine_slope - 1.0) <= 0.15);
  CHECK(many.slope > many.fine_slope);
  CHECK_THROWS_AS(cutoff_rate_study(g, {0.3, 0.25}, 4), InvalidArgument);
}

TEST_CASE("gauge lemma") {
  const Grid g(9.0, 181);
  const GridFunction u = analytic_state(1, 0, g).values;
  CHECK(all_pass(check_gauge_lemma(kModel, g, u, Point::Zero())));
  CHECK(all_pass(check_gauge_lemma(kModel, g, u, Point(2.0, 0.0))));
  CHECK_THROWS_AS(check_gauge_lemma(kModel, g, u, Point(0.05, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(check_gauge_lemma(kModel, g, u, Point(8.0, 0.0)), InvalidArgument);
}

TEST_CASE("gauge conjugation error converges at second order") {
  const Potential trig = make_potential(PotentialKind::quadratic_plus_trig, {0.1});
  for (int axis : {0, 1}) {
    const Point q = axis == 0 ? Point(0.5, 1.0) : Point(1.0, 0.0);
    std::vector<double> err;
    for (int n : {65, 129, 257, 513}) err.push_back(gauge_conjugation_error(trig, Grid(4.0, n), 0.5, q, axis, order(2)));
    for (size_t i = 0; i + 1 < err.size(); ++i) {
      CAPTURE(axis);
      CAPTURE(i);
      CHECK(err[i] / err[i + 1] == doctest::Approx(4.0).epsilon(0.15));
    }
    // The default sixth-order stencil is far more accurate on the same grid.
    CHECK(gauge_conjugation_error(trig, Grid(4.0, 129), 0.5, q, axis) <= 1e-2 * err[1]);
  }
}

TEST_CASE("trend checks and slopes") {
  CHECK(fit_slope({0, 1, 2, 3}, {1, 4, 7, 10}) == doctest::Approx(3.0));
  CHECK(fit_slope({1, 2}, {5, 5}) == doctest::Approx(0.0));

  const TrendCheck flat = trend_check({0, 1, 2, 3}, {0.8, 0.8, 0.8, 0.8}, 2);
  CHECK(flat.pass);
  CHECK(flat.slope == doctest::Approx(0.0));

  const TrendCheck jump = trend_check({0, 1, 2}, {1.0, 1.0, 1.3}, 2);
  CHECK(jump.max_all == 1.3);
  CHECK(jump.max_low == 1.0);
  CHECK_FALSE(jump.pass);

  // Bounded but growing by 0.02 per level.
  const TrendCheck grow = trend_check({0, 1, 2, 3}, {0.5, 0.5, 0.52, 0.56}, 2);
  CHECK(grow.max_all <= 1.25 * grow.max_low);
  CHECK(grow.slope > 0.01);
  CHECK_FALSE(grow.pass);

  CHECK(trend_check({1, 2, 3, 4, 5}, {0.7, 0.69, 0.7, 0.69, 0.7}, 1).pass);
}

TEST_CASE("lemma rows pass exactly when lhs <= rhs") {
  CHECK(make_row("x", "", 1.0, 1.0).pass);
  CHECK_FALSE(make_row("x", "", std::nextafter(1.0, 2.0), 1.0).pass);
  const auto j = to_json(make_row("energy_identity", "vector 0", 0.5, 1.0));
  CHECK(j["lemma_id"] == "energy_identity");
  CHECK(j["pass"] == true);
}

TEST_CASE("small sweep on the model potential") {
  const Grid g(6.0, 65);
  SweepOptions o;
  o.max_level = 1;
  const BoundReport r = sweep_bounds(kModel, g, o);
  REQUIRE(r.levels.size() == 2);
  CHECK(r.levels[0].level == 0);
  CHECK(r.levels[1].lambda_sq == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(r.levels[0].ratio_linf - std::sqrt(2 / std::numbers::pi)) <= 0.05);
  for (const auto& l : r.levels) {
    CHECK(l.cluster_dim <= l.window_count);
    CHECK(l.ascent_converged);
    CHECK(l.max_window_energy_defect >= l.max_energy_defect);
  }
  CHECK(r.lemmas.size() == 4);
  CHECK(to_csv(r).rfind("level,lambda_sq,cluster_dim,ratio_linf,ratio_l6,scaled_l6\n", 0) == 0);
  const auto j = to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["levels"].size() == 2);
  CHECK(j["all_pass"] == r.all_pass());

  o.window_half_width = 1.0;
  CHECK_THROWS_AS(sweep_bounds(kModel, g, o), InvalidArgument);
}
