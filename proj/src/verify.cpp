#include "landau/verify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "landau/io.hpp"
#include "landau/model_oracle.hpp"

namespace landau {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double glue_d1(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }
double glue_d2(double t) {
  return t > 0.0 ? std::exp(-1.0 / t) * (1.0 / (t * t * t * t) - 2.0 / (t * t * t)) : 0.0;
}

// psi and its first two radial derivatives on (1, 2); zero derivatives elsewhere.
struct Radial {
  double v, d1, d2;
};

Radial profile(double r, int power) {
  if (r <= 1.0) return {1.0, 0.0, 0.0};
  if (r >= 2.0) return {0.0, 0.0, 0.0};
  const double a = glue(2 - r), b = glue(r - 1);
  const double da = -glue_d1(2 - r), db = glue_d1(r - 1);
  const double dda = glue_d2(2 - r), ddb = glue_d2(r - 1);
  const double s = a + b, ds = da + db, dds = dda + ddb;
  const double v = a / s;
  const double d1 = (da * s - a * ds) / (s * s);
  const double d2 = (dda * s - a * dds) / (s * s) - 2 * ds * (da * s - a * ds) / (s * s * s);
  if (power == 1) return {v, d1, d2};
  return {v * v, 2 * v * d1, 2 * d1 * d1 + 2 * v * d2};
}

double weighted_norm(const Field& f, const Grid& g) { return std::sqrt(g.weight()) * f.norm(); }

// sup |grad d_j phi| by centered differences of the gradient, over the nodes of g.
double sup_hessian_row(const Potential& p, const Grid& g, int j) {
  const double d = 1e-5;
  double best = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    const Point x = g.node(k);
    const Point e1(d, 0), e2(0, d);
    const double h1 = (p.grad(x + e1)[j] - p.grad(x - e1)[j]) / (2 * d);
    const double h2 = (p.grad(x + e2)[j] - p.grad(x - e2)[j]) / (2 * d);
    best = std::max(best, std::hypot(h1, h2));
  }
  return best;
}

void require_margin(const Grid& g, const Point& q, const char* what) {
  if (std::abs(q[0]) + 2.0 > g.extent() + 1e-12 || std::abs(q[1]) + 2.0 > g.extent() + 1e-12)
    throw InvalidArgument(std::string(what) + ": center lies within distance 2 of the boundary");
}

std::vector<Point> lattice_window(const Grid& g) {
  std::vector<Point> out;
  const int r = static_cast<int>(std::floor(g.extent() - 2.0 + 1e-12));
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) out.emplace_back(a, b);
  return out;
}

struct EnergyOps {
  OperatorHandle a, b;
  RealField quarter_lap;
};

EnergyOps energy_ops(const Potential& p, const Grid& g, std::optional<double> h,
                     const Discretization& disc) {
  const double hh = h.value_or(1.0);
  RealField lap(g.size());
  for (Index k = 0; k < g.size(); ++k) lap[k] = 0.25 * hh * p.laplacian(g.node(k) / std::sqrt(hh));
  return {build_operator(OperatorLabel::A, p, g, h, std::nullopt, disc),
          build_operator(OperatorLabel::B, p, g, h, std::nullopt, disc), lap};
}

double defect(const EnergyOps& ops, const GridFunction& u, double lambda_sq) {
  const double w = u.grid.weight();
  const double lhs = w * (ops.a.apply(u.values).squaredNorm() + ops.b.apply(u.values).squaredNorm());
  const double rhs = w * ((ops.quarter_lap.array() + lambda_sq) * u.values.cwiseAbs2().array()).sum();
  return std::abs(lhs - rhs) / std::abs(rhs);
}

void check_cluster_matches(const OperatorHandle& op, const EigenCluster& c) {
  for (int j = 0; j < c.dim(); ++j) {
    const GridFunction& u = c.basis[j];
    if (!(u.grid == op.grid())) throw InvalidArgument("energy lemma: cluster lives on another grid");
    const double nrm = weighted_norm(u.values, u.grid);
    if (!(nrm > 1e-12)) throw InvalidArgument("energy lemma: zero vector is not a unit eigenvector");
    const double rq = u.grid.weight() * u.values.dot(op.apply(u.values)).real() / (nrm * nrm);
    if (std::abs(rq - c.eigenvalues[j]) > 1e-6 * std::max(1.0, std::abs(c.eigenvalues[j])))
      throw InvalidArgument("energy lemma: cluster does not belong to the " + to_string(op.label()) +
                            " operator");
  }
}

}  // namespace

double cutoff_profile(double r) { return profile(r, 1).v; }

Cutoff make_cutoff(const Point& q, const Grid& g, int power) {
  if (power != 1 && power != 2) throw InvalidArgument("cutoff power must be 1 or 2");
  Cutoff c;
  c.center = q;
  c.power = power;
  c.beta.resize(g.size());
  c.beta_tilde.resize(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const double r = (g.node(k) - q).norm();
    c.beta[k] = profile(r, power).v;
    c.beta_tilde[k] = profile(0.5 * r, power).v;
  }

  const int mesh = 200000;
  for (int i = 0; i <= mesh; ++i) {
    const double r = 1.0 + static_cast<double>(i) / mesh;
    const Radial p = profile(r, power);
    c.sup_d1 = std::max(c.sup_d1, std::abs(p.d1));
    c.sup_laplacian = std::max(c.sup_laplacian, std::abs(p.d2 + p.d1 / r));
  }
  c.sup_d2 = c.sup_d1;

  // Lattice translates: the sums are 1-periodic and symmetric, so a quarter cell suffices.
  const int cell = 100;
  double s1 = 0.0, s2 = 0.0, sl = 0.0;
  for (int i = 0; i <= cell; ++i) {
    for (int j = 0; j <= cell; ++j) {
      const Point x(0.5 * i / cell, 0.5 * j / cell);
      double t1 = 0.0, t2 = 0.0, tl = 0.0;
      for (int a = -2; a <= 3; ++a) {
        for (int b = -2; b <= 3; ++b) {
          const Point d = x - Point(a, b);
          const double r = d.norm();
          if (r <= 1.0 || r >= 2.0) continue;
          const Radial p = profile(r, power);
          t1 += std::pow(p.d1 * d[0] / r, 2);
          t2 += std::pow(p.d1 * d[1] / r, 2);
          tl += std::pow(p.d2 + p.d1 / r, 2);
        }
      }
      s1 = std::max(s1, t1);
      s2 = std::max(s2, t2);
      sl = std::max(sl, tl);
    }
  }
  c.overlap_d1 = std::sqrt(s1);
  c.overlap_d2 = std::sqrt(s2);
  c.overlap_laplacian = std::sqrt(sl);
  return c;
}

LemmaRow make_row(std::string id, std::string detail, double lhs, double rhs) {
  return {std::move(id), std::move(detail), lhs, rhs, lhs <= rhs};
}

double energy_identity_defect(const Potential& p, const GridFunction& u, double lambda_sq,
                              const Discretization& disc) {
  return defect(energy_ops(p, u.grid, std::nullopt, disc), u, lambda_sq);
}

std::vector<LemmaRow> check_energy_lemma(const Potential& p, const Grid& g, const EigenCluster& c,
                                         std::optional<double> h, const Discretization& disc) {
  if (c.basis.empty()) throw InvalidArgument("energy lemma: empty cluster");
  const OperatorHandle op = h ? build_operator(OperatorLabel::P, p, g, h, std::nullopt, disc)
                              : build_operator(OperatorLabel::H, p, g, std::nullopt, std::nullopt, disc);
  check_cluster_matches(op, c);
  const EnergyOps ops = energy_ops(p, g, h, disc);
  std::vector<LemmaRow> rows;
  if (h) {
    const double bound = std::sqrt(*h / 4 * sup_laplacian(p, g, *h) + 1.0);
    for (int j = 0; j < c.dim(); ++j) {
      const Field& u = c.basis[j].values;
      const double un = weighted_norm(u, g);
      const std::string d = "h=" + format_double(*h) + " vector " + std::to_string(j);
      rows.push_back(make_row("semiclassical_energy:A", d, weighted_norm(ops.a.apply(u), g), (bound + 1e-3) * un));
      rows.push_back(make_row("semiclassical_energy:B", d, weighted_norm(ops.b.apply(u), g), (bound + 1e-3) * un));
    }
  } else {
    for (int j = 0; j < c.dim(); ++j)
      rows.push_back(make_row("energy_identity", "vector " + std::to_string(j),
                              defect(ops, c.basis[j], c.eigenvalues[j]), 1e-3));
  }
  return rows;
}

double cutoff_constant(double h, double sup_laplacian_phi, double sup_lap_beta, double sup_d1_beta,
                       double sup_d2_beta) {
  return h * (h / 4 * sup_lap_beta + std::sqrt(h / 4 * sup_laplacian_phi + 1.0) * (sup_d1_beta + sup_d2_beta));
}

double sup_laplacian(const Potential& p, const Grid& g, double h) {
  double best = 0.0;
  for (Index k = 0; k < g.size(); ++k) best = std::max(best, std::abs(p.laplacian(g.node(k) / std::sqrt(h))));
  return best;
}

std::vector<LemmaRow> check_cutoff_lemma(const Potential& p, const Grid& g, const GridFunction& u,
                                         double h, const std::vector<Point>& centers, int power,
                                         const Discretization& disc) {
  if (!(u.grid == g)) throw InvalidArgument("cutoff lemma: u lives on another grid");
  for (const Point& q : centers) require_margin(g, q, "cutoff lemma");
  const OperatorHandle op = build_operator(OperatorLabel::P, p, g, h, std::nullopt, disc);
  const double un = weighted_norm(u.values, g);
  const double slack = weighted_norm(op.apply(u.values), g);
  const double lap_phi = sup_laplacian(p, g, h);

  std::vector<LemmaRow> rows;
  for (const Point& q : centers) {
    const Cutoff c = make_cutoff(q, g, power);
    const double lhs = weighted_norm(op.apply(c.beta.cast<Complex>().cwiseProduct(u.values)), g);
    const double k = cutoff_constant(h, lap_phi, c.sup_laplacian, c.sup_d1, c.sup_d2);
    rows.push_back(make_row("cutoff_commutator:sup", "h=" + format_double(h) + " q=(" + format_double(q[0]) +
                                                     "," + format_double(q[1]) + ")",
                            lhs, 1.05 * k * un + slack));
  }

  const auto window = lattice_window(g);
  if (!window.empty()) {
    double sum = 0.0, overlap_beta = 0.0;
    RealField beta_sq = RealField::Zero(g.size());
    Cutoff c;
    for (const Point& q : window) {
      c = make_cutoff(q, g, power);
      sum += std::pow(weighted_norm(op.apply(c.beta.cast<Complex>().cwiseProduct(u.values)), g), 2);
      beta_sq += c.beta.cwiseAbs2();
    }
    overlap_beta = std::sqrt(beta_sq.maxCoeff());
    const double k = h * (h / 4 * c.overlap_laplacian +
                          std::sqrt(h / 4 * lap_phi + 1.0) * (c.overlap_d1 + c.overlap_d2));
    rows.push_back(make_row("cutoff_commutator:l2", "h=" + format_double(h) + " lattice points " +
                                                    std::to_string(window.size()),
                            std::sqrt(sum), 1.05 * k * un + overlap_beta * slack));
  }
  return rows;
}

LemmaRow check_cutoff_lemma_sup(const Potential& p, const Grid& g, const Basis& basis, double h,
                                const Point& q, int power, const Discretization& disc) {
  require_margin(g, q, "cutoff lemma");
  const OperatorHandle op = build_operator(OperatorLabel::P, p, g, h, std::nullopt, disc);
  const Basis u = orthonormal_columns(basis, g);
  const Cutoff c = make_cutoff(q, g, power);
  Basis y(u.rows(), u.cols()), r(u.rows(), u.cols());
  for (Index j = 0; j < u.cols(); ++j) {
    y.col(j) = op.apply(c.beta.cast<Complex>().cwiseProduct(u.col(j)));
    r.col(j) = op.apply(u.col(j));
  }
  // ||sum c_j u_j|| = |c|, so the sup over the span is the top singular value.
  const double sw = std::sqrt(g.weight());
  const double lhs = sw * Eigen::JacobiSVD<Eigen::MatrixXcd>(y).singularValues()[0];
  const double slack = sw * Eigen::JacobiSVD<Eigen::MatrixXcd>(r).singularValues()[0];
  const double k = cutoff_constant(h, sup_laplacian(p, g, h), c.sup_laplacian, c.sup_d1, c.sup_d2);
  return make_row("cutoff_commutator:sup", "h=" + format_double(h) + " span of " + std::to_string(u.cols()),
                  lhs, 1.05 * k + slack);
}

std::vector<LemmaRow> check_gauge_lemma(const Potential& p, const Grid& g, const GridFunction& u,
                                        const Point& q, const Discretization& disc) {
  if (!(u.grid == g)) throw InvalidArgument("gauge lemma: u lives on another grid");
  require_margin(g, q, "gauge lemma");
  if (g.find_node(q) < 0) throw InvalidArgument("gauge lemma: q must be a grid node");

  const OperatorHandle a = build_operator(OperatorLabel::A, p, g, std::nullopt, std::nullopt, disc);
  const OperatorHandle b = build_operator(OperatorLabel::B, p, g, std::nullopt, std::nullopt, disc);
  const OperatorHandle phase = gauge_multiplier(p, g, 1.0, q);
  const Field beta0 = make_cutoff(Point::Zero(), g).beta.cast<Complex>();
  const Field betaq = make_cutoff(q, g).beta.cast<Complex>();

  const Field moved = phase.apply(beta0.cwiseProduct(translate(u, -q).values));
  const Field local = betaq.cwiseProduct(u.values);
  const double un = weighted_norm(u.values, g);

  std::vector<LemmaRow> rows;
  const std::string d = "q=(" + format_double(q[0]) + "," + format_double(q[1]) + ")";
  for (int j = 0; j < 2; ++j) {
    const OperatorHandle& op = j == 0 ? a : b;
    const int comp = j == 0 ? 1 : 0;  // A carries d2phi, B carries d1phi
    double ball = 0.0;
    for (Index k = 0; k < g.size(); ++k)
      if (g.node(k).norm() <= 2.0) ball = std::max(ball, std::abs(p.grad(g.node(k))[comp]));
    const double chain = weighted_norm(op.apply(local), g) + sup_hessian_row(p, g, comp) * un + ball * un;
    rows.push_back(make_row(j == 0 ? "gauge_cutoff:A" : "gauge_cutoff:B", d, weighted_norm(op.apply(moved), g),
                            1.05 * chain));
  }
  return rows;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

TrendCheck trend_check(const std::vector<int>& levels, const std::vector<double>& values, int low) {
  TrendCheck t;
  if (values.empty()) {
    t.pass = true;
    return t;
  }
  const int nlow = std::max(1, std::min<int>(low, static_cast<int>(values.size())));
  t.max_all = *std::max_element(values.begin(), values.end());
  t.max_low = *std::max_element(values.begin(), values.begin() + nlow);
  std::vector<double> x(levels.begin(), levels.end());
  t.slope = fit_slope(x, values);
  t.pass = t.max_all <= 1.25 * t.max_low && t.slope <= 0.01;
  return t;
}

bool BoundReport::all_pass() const {
  return linf_trend.pass && l6_trend.pass &&
         std::all_of(lemmas.begin(), lemmas.end(), [](const LemmaRow& r) { return r.pass; });
}

BoundReport sweep_bounds(const Potential& p, const Grid& g, const SweepOptions& opts) {
  if (opts.max_level < 0) throw InvalidArgument("sweep.max_level must be >= 0");
  if (!(opts.window_half_width > 0.0) || !(opts.window_half_width < 0.5 * opts.level_spacing))
    throw InvalidArgument("sweep window half width must lie in (0, level_spacing / 2)");
  check_truncation(p, g);

  BoundReport rep;
  rep.potential_kind = to_string(p.kind);
  rep.params = p.params;
  rep.extent_L = g.extent();
  rep.n_per_side = g.n();

  const OperatorHandle h = build_operator(OperatorLabel::H, p, g, std::nullopt, std::nullopt, opts.disc);
  const EnergyOps ops = energy_ops(p, g, std::nullopt, opts.disc);
  for (int n = 0; n <= opts.max_level; ++n) {
    const double center = opts.level_spacing * n;
    const auto pairs =
        window_eigenpairs(h, center - opts.window_half_width, center + opts.window_half_width, opts.solve);
    const EigenCluster bulk = bulk_cluster(h, pairs, opts.edge_margin, opts.edge_mass_tol, n);
    if (bulk.dim() == 0) {
      rep.warnings.push_back("level " + std::to_string(n) + " has no bulk states on this grid; excluded");
      continue;
    }
    const ExtremalRatio er = extremal_ratios(bulk, n, opts.ascent);

    LevelRow row;
    row.level = n;
    row.lambda_sq = er.lambda_sq;
    row.cluster_dim = bulk.dim();
    row.ratio_linf = er.ratio_linf;
    row.ratio_l6 = er.ratio_l6;
    row.scaled_l6 = er.scaled_l6;
    row.spread = bulk.spread();
    row.window_count = static_cast<int>(pairs.size());
    row.ascent_converged = er.ascent_converged;
    double worst_res = 0.0;
    for (const auto& pr : pairs) {
      worst_res = std::max(worst_res, pr.residual / std::max(1.0, std::abs(pr.value)));
      row.max_window_energy_defect = std::max(row.max_window_energy_defect, defect(ops, pr.vector, pr.value));
    }
    for (int j = 0; j < bulk.dim(); ++j)
      row.max_energy_defect = std::max(row.max_energy_defect, defect(ops, bulk.basis[j], bulk.eigenvalues[j]));
    row.max_pair_residual = worst_res;
    if (!er.ascent_converged)
      rep.warnings.push_back("level " + std::to_string(n) + ": L6 ascent hit its iteration cap");
    rep.levels.push_back(row);

    const std::string d = "level " + std::to_string(n) + ", " + std::to_string(pairs.size()) + " eigenpairs";
    rep.lemmas.push_back(make_row("solver_residual", d, worst_res, opts.solve.tol));
    rep.lemmas.push_back(make_row("energy_identity", "level " + std::to_string(n) + ", " +
                                                         std::to_string(bulk.dim()) + " bulk vectors",
                                  row.max_energy_defect, 1e-3));
  }

  std::vector<int> l1, l2;
  std::vector<double> v1, v2;
  int low1 = 0;
  for (const auto& r : rep.levels) {
    l1.push_back(r.level);
    v1.push_back(r.ratio_linf);
    low1 += r.level <= 1;
    if (r.level >= 1) {
      l2.push_back(r.level);
      v2.push_back(r.scaled_l6);
    }
  }
  rep.linf_trend = trend_check(l1, v1, low1);
  rep.l6_trend = trend_check(l2, v2, 1);
  if (l2.empty()) rep.warnings.push_back("no levels >= 1: the L6 trend check is vacuous");
  return rep;
}

nlohmann::ordered_json to_json(const LemmaRow& r) {
  nlohmann::ordered_json j;
  j["lemma_id"] = r.lemma_id;
  j["detail"] = r.detail;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["pass"] = r.pass;
  return j;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  auto trend = [](const TrendCheck& t) {
    nlohmann::ordered_json j;
    j["max_all"] = t.max_all;
    j["max_low"] = t.max_low;
    j["slope"] = t.slope;
    j["pass"] = t.pass;
    return j;
  };
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["potential"] = {{"kind", r.potential_kind}, {"params", r.params}};
  j["grid"] = {{"extent_L", r.extent_L}, {"n_per_side", r.n_per_side}};
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : r.levels) {
    nlohmann::ordered_json x;
    x["level"] = l.level;
    x["lambda_sq"] = l.lambda_sq;
    x["cluster_dim"] = l.cluster_dim;
    x["ratio_linf"] = l.ratio_linf;
    x["ratio_l6"] = l.ratio_l6;
    x["scaled_l6"] = l.scaled_l6;
    x["spread"] = l.spread;
    x["window_count"] = l.window_count;
    x["max_pair_residual"] = l.max_pair_residual;
    x["max_energy_defect"] = l.max_energy_defect;
    x["max_window_energy_defect"] = l.max_window_energy_defect;
    x["ascent_converged"] = l.ascent_converged;
    j["levels"].push_back(x);
  }
  j["linf_trend"] = trend(r.linf_trend);
  j["l6_trend"] = trend(r.l6_trend);
  j["lemmas"] = nlohmann::ordered_json::array();
  for (const auto& l : r.lemmas) j["lemmas"].push_back(to_json(l));
  j["warnings"] = r.warnings;
  j["all_pass"] = r.all_pass();
  return j;
}

std::string to_csv(const BoundReport& r) {
  std::string s = "level,lambda_sq,cluster_dim,ratio_linf,ratio_l6,scaled_l6\n";
  for (const auto& l : r.levels)
    s += std::to_string(l.level) + ',' + format_double(l.lambda_sq) + ',' + std::to_string(l.cluster_dim) +
         ',' + format_double(l.ratio_linf) + ',' + format_double(l.ratio_l6) + ',' +
         format_double(l.scaled_l6) + '\n';
  return s;
}

RateStudy cutoff_rate_study(const Grid& g, const std::vector<double>& h_list, int basis_size,
                            const Discretization& disc) {
  if (h_list.size() < 2) throw InvalidArgument("lemmas.h_list needs at least two values");
  const Potential model = make_potential(PotentialKind::model_quadratic);
  RateStudy out;
  std::vector<double> lx, ly;
  for (double h : h_list) {
    if (!(h > 0.0)) throw InvalidArgument("lemmas.h_list values must be > 0");
    const double n = 1.0 / (2.0 * h);
    if (std::abs(n - std::round(n)) > 1e-9 || std::round(n) < 1)
      throw InvalidArgument("lemmas.h_list: 1/(2h) must be a positive integer (a model level)");
    const int level = static_cast<int>(std::round(n));
    Basis b(g.size(), basis_size);
    for (int m = 0; m < basis_size; ++m) b.col(m) = analytic_state(level, m, g).values.values;
    const Grid gs(std::sqrt(h) * g.extent(), g.n());
    LemmaRow row = check_cutoff_lemma_sup(model, gs, b, h, Point::Zero(), 1, disc);
    row.detail += " level " + std::to_string(level);
    out.h.push_back(h);
    lx.push_back(std::log(h));
    ly.push_back(std::log(row.lhs));
    out.rows.push_back(row);
  }
  out.slope = fit_slope(lx, ly);
  // h_list order is free, so pick the two smallest h explicitly.
  std::vector<size_t> idx(lx.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return lx[a] < lx[b]; });
  out.fine_slope = (ly[idx[1]] - ly[idx[0]]) / (lx[idx[1]] - lx[idx[0]]);
  return out;
}

double gauge_conjugation_error(const Potential& p, const Grid& g, double h, const Point& q, int axis,
                               const Discretization& disc) {
  if (axis != 0 && axis != 1) throw InvalidArgument("axis must be 0 or 1");
  const OperatorHandle t = gauge_multiplier(p, g, h, q);
  const OperatorHandle x = build_operator(axis == 0 ? OperatorLabel::A_tilde_q : OperatorLabel::B_tilde_q,
                                          p, g, h, q, disc);
  const Field f = GridFunction::sample(g, [](const Point& y) { return Complex(std::exp(-y.squaredNorm())); }).values;
  const Field tf = t.apply(f);

  // T^{-1} multiplies by the conjugate phase.
  const Field phase = t.apply(Field::Ones(g.size()));
  const Field conj_xt = phase.conjugate().cwiseProduct(x.apply(tf));

  const double s = std::sqrt(h);
  RealField m(g.size());
  for (Index k = 0; k < g.size(); ++k) m[k] = 0.5 * s * p.grad((g.node(k) + q) / s)[axis == 0 ? 1 : 0];
  const Field dpart = Complex(h / 2) * derivative(g, axis, disc.stencil_order).apply(f);
  const Field right = axis == 0 ? Field(dpart - m.cast<Complex>().cwiseProduct(f))
                                : Field(dpart + m.cast<Complex>().cwiseProduct(f));
  return (conj_xt - right).cwiseAbs().maxCoeff();
}

}  // namespace landau
