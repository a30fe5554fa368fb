#include "landau/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace landau {

namespace {

using SolveFn = std::function<Field(const Field&)>;

Field random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Field v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = nd(rng);
    v[i] = Complex(re, nd(rng));
  }
  return v / v.norm();
}

SparseMatrix shifted(const SparseMatrix& a, double sigma) {
  SparseMatrix id(a.rows(), a.cols());
  id.setIdentity();
  SparseMatrix m = a - Complex(sigma) * id;
  m.makeCompressed();
  return m;
}

// (op - sigma)^{-1} by sparse LDL^T with one step of iterative refinement,
// falling back to LU when the unpivoted factorization of an indefinite
// matrix is too inaccurate for refinement to repair.
SolveFn direct_solver(const OperatorHandle& op, double sigma, std::uint64_t seed) {
  auto m = std::make_shared<SparseMatrix>(shifted(assemble_sparse(op), sigma));
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  const Field b = random_vector(m->rows(), rng);

  auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower>>(*m);
  if (ldlt->info() == Eigen::Success) {
    auto refined = [ldlt, m](const Field& r) -> Field {
      Field x = ldlt->solve(r);
      return Field(x + ldlt->solve(r - (*m) * x));
    };
    if (((*m) * refined(b) - b).norm() <= 1e-8) return refined;
  }
  auto lu = std::make_shared<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
  lu->analyzePattern(*m);
  lu->factorize(*m);
  if (lu->info() != Eigen::Success)
    throw ConvergenceError("shift-invert: factorization failed (shift " + std::to_string(sigma) +
                           " may be an eigenvalue)");
  return [lu](const Field& r) -> Field { return lu->solve(r); };
}

// Jacobi-preconditioned conjugate gradients on op - sigma.
SolveFn cg_solver(const OperatorHandle& op, double sigma, const EigenOptions& opts) {
  RealField diag = RealField::Ones(op.grid().size());
  if (op.has_assembler()) {
    const SparseMatrix a = assemble_sparse(op);
    for (Index i = 0; i < a.rows(); ++i) diag[i] = a.coeff(i, i).real() - sigma;
    if (diag.minCoeff() <= 0.0)
      throw ConvergenceError("conjugate gradients: op - shift has a non-positive diagonal");
  }
  const double tol = std::min(1e-12, opts.tol * 1e-4);
  const int max_iter = opts.inner_max_iter;
  return [op, sigma, diag, tol, max_iter](const Field& b) -> Field {
    Field x = Field::Zero(b.size());
    Field r = b;
    Field z = r.cwiseQuotient(diag.cast<Complex>());
    Field p = z;
    Complex rz = r.dot(z);
    const double bn = b.norm();
    for (int it = 0; it < max_iter; ++it) {
      const Field ap = op.apply(p) - sigma * p;
      const double pap = p.dot(ap).real();
      if (!(pap > 0.0))
        throw ConvergenceError("conjugate gradients: op - shift is not positive definite");
      const Complex alpha = rz / pap;
      x += alpha * p;
      r -= alpha * ap;
      if (r.norm() <= tol * bn) return x;
      z = r.cwiseQuotient(diag.cast<Complex>());
      const Complex rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    throw ConvergenceError("conjugate gradients: no convergence within " + std::to_string(max_iter) +
                           " iterations");
  };
}

SolveFn make_solver(const OperatorHandle& op, double sigma, const EigenOptions& opts) {
  const bool direct = opts.inner == InnerSolver::direct ||
                      (opts.inner == InnerSolver::automatic && op.has_assembler());
  return direct ? direct_solver(op, sigma, opts.seed) : cg_solver(op, sigma, opts);
}

// Krylov-Schur iteration for the nev eigenvalues of largest modulus of the
// Hermitian map t. Returns orthonormal (unweighted) Ritz vectors.
Basis krylov_schur(const SolveFn& t, Index n, int nev, int m, double tol, int max_restarts,
                   const Field& start, std::mt19937_64& rng) {
  Basis v = Basis::Zero(n, m + 1);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m + 1, m);
  v.col(0) = start / start.norm();
  int l = 0;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    for (int j = l; j < m; ++j) {
      Field w = t(v.col(j));
      Eigen::VectorXcd h = v.leftCols(j + 1).adjoint() * w;
      w -= v.leftCols(j + 1) * h;
      const Eigen::VectorXcd h2 = v.leftCols(j + 1).adjoint() * w;
      w -= v.leftCols(j + 1) * h2;
      h += h2;
      g.col(j).head(j + 1) = h;
      double beta = w.norm();
      if (beta <= 1e-13 * h.norm()) {
        // Invariant subspace: continue with a fresh direction, decoupled.
        w = random_vector(n, rng);
        for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
        beta = 0.0;
        v.col(j + 1) = w / w.norm();
      } else {
        v.col(j + 1) = w / beta;
      }
      g(j + 1, j) = beta;
    }

    const Eigen::MatrixXcd hm = g.topRows(m);
    const Eigen::MatrixXcd s = 0.5 * (hm + hm.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    const Eigen::VectorXd theta = es.eigenvalues();
    const Eigen::MatrixXcd& y = es.eigenvectors();

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(theta[a]) > std::abs(theta[b]); });

    const Eigen::RowVectorXcd brow = g.row(m);
    bool done = true;
    for (int i = 0; i < nev && done; ++i) {
      const int c = order[i];
      if (std::abs((brow * y.col(c)).value()) > tol * std::abs(theta[c])) done = false;
    }

    const int keep = done ? nev : std::min(m - 1, nev + (m - nev) / 2);
    Eigen::MatrixXcd ysel(m, keep);
    for (int i = 0; i < keep; ++i) ysel.col(i) = y.col(order[i]);
    Basis kept = v.leftCols(m) * ysel;
    if (done) return kept.leftCols(nev);
    if (restart == max_restarts) break;

    const Field last = v.col(m);
    v.leftCols(keep) = kept;
    v.col(keep) = last;
    const Eigen::RowVectorXcd spike = brow * ysel;
    g.setZero();
    for (int i = 0; i < keep; ++i) g(i, i) = theta[order[i]];
    g.row(keep).head(keep) = spike;
    l = keep;
  }
  throw ConvergenceError("Krylov-Schur: no convergence within " + std::to_string(max_restarts) +
                         " restarts");
}

// Rayleigh-Ritz of op on span(x) followed by matrix-free residual certification.
std::vector<EigenPair> certify(const OperatorHandle& op, const Basis& x) {
  const Grid& grid = op.grid();
  Basis y(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) y.col(j) = op.apply(x.col(j));
  const Eigen::MatrixXcd k = x.adjoint() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (k + k.adjoint()));
  const Basis z = x * es.eigenvectors();

  std::vector<EigenPair> out;
  const double scale = 1.0 / std::sqrt(grid.weight());
  for (Index j = 0; j < z.cols(); ++j) {
    Field u = z.col(j) / z.col(j).norm();
    Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    u *= std::conj(u[arg]) / std::abs(u[arg]);
    GridFunction f(grid, u * scale);
    const double mu = es.eigenvalues()[j];
    out.push_back({mu, f, residual_norm(op, f, mu)});
  }
  return out;
}

int default_krylov_dim(const EigenOptions& opts, int nev, Index n) {
  const int m = opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * nev + 20, nev + 40);
  return static_cast<int>(std::min<Index>(m, n - 1));
}

// Eigenpairs of op nearest sigma, certified; tightens the Ritz tolerance
// until every pair meets tol max(1, |mu|).
std::vector<EigenPair> nearest(const OperatorHandle& op, int nev, const EigenOptions& opts,
                               const SolveFn& solve) {
  const Index n = op.grid().size();
  const int m = default_krylov_dim(opts, nev, n);
  if (nev >= m) throw InvalidArgument("eigensolver: too many eigenpairs requested for this grid");
  std::mt19937_64 rng(opts.seed);
  Field start = random_vector(n, rng);
  double ritz_tol = opts.tol * 1e-3;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const Basis x = krylov_schur(solve, n, nev, m, ritz_tol, opts.max_restarts, start, rng);
    auto pairs = certify(op, x);
    const bool ok = std::all_of(pairs.begin(), pairs.end(), [&](const EigenPair& p) {
      return p.residual <= opts.tol * std::max(1.0, std::abs(p.value));
    });
    if (ok) return pairs;
    start = x.rowwise().sum();
    ritz_tol *= 1e-2;
  }
  throw ConvergenceError("eigensolver: residuals above tolerance after tightening");
}

int negative_count(const SparseMatrix& a, double s) {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt(shifted(a, s));
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("inertia: LDL^T factorization failed");
  const auto d = ldlt.vectorD();
  int c = 0;
  for (Index i = 0; i < d.size(); ++i) c += d[i].real() < 0.0;
  return c;
}

void require_hermitian(const OperatorHandle& op) {
  if (!op.is_hermitian()) throw InvalidArgument("eigensolver: operator is not flagged Hermitian");
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const OperatorHandle& op, int k, const EigenOptions& opts) {
  require_hermitian(op);
  if (k < 1 || k > 200) throw InvalidArgument("solve.k must be in [1, 200]");
  if (!(opts.tol >= 1e-8)) throw InvalidArgument("solve.tol must be >= 1e-8");
  const int buffer = std::max(4, k / 4);
  const SolveFn solve = make_solver(op, opts.shift, opts);
  auto pairs = nearest(op, k + buffer, opts, solve);
  pairs.erase(pairs.begin() + k, pairs.end());
  return pairs;
}

std::vector<EigenPair> lowest_eigenpairs(const OperatorHandle& op, int k, double tol,
                                         std::uint64_t seed) {
  EigenOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  return lowest_eigenpairs(op, k, opts);
}

std::vector<EigenPair> nearest_eigenpairs(const OperatorHandle& op, double sigma, int k,
                                          const EigenOptions& opts) {
  require_hermitian(op);
  if (k < 1 || k > 200) throw InvalidArgument("k must be in [1, 200]");
  const SolveFn solve = make_solver(op, sigma, opts);
  auto pairs = nearest(op, k + std::max(4, k / 4), opts, solve);
  std::stable_sort(pairs.begin(), pairs.end(), [sigma](const EigenPair& a, const EigenPair& b) {
    return std::abs(a.value - sigma) < std::abs(b.value - sigma);
  });
  pairs.erase(pairs.begin() + k, pairs.end());
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return pairs;
}

int count_in_window(const OperatorHandle& op, double lo, double hi) {
  require_hermitian(op);
  if (!(lo < hi)) throw InvalidArgument("window: lo must be below hi");
  const SparseMatrix a = assemble_sparse(op);
  return negative_count(a, hi) - negative_count(a, lo);
}

std::vector<EigenPair> window_eigenpairs(const OperatorHandle& op, double lo, double hi,
                                         const EigenOptions& opts) {
  const int count = count_in_window(op, lo, hi);
  if (count == 0) return {};
  if (count > 200) throw InvalidArgument("window holds " + std::to_string(count) + " eigenvalues (max 200)");
  const double sigma = 0.5 * (lo + hi);
  const SolveFn solve = make_solver(op, sigma, opts);
  int buffer = std::max(4, count / 8);
  for (int attempt = 0; attempt < 3; ++attempt, buffer *= 2) {
    auto pairs = nearest(op, count + buffer, opts, solve);
    std::erase_if(pairs, [&](const EigenPair& p) { return p.value < lo || p.value >= hi; });
    if (static_cast<int>(pairs.size()) == count) return pairs;
  }
  throw ConvergenceError("window solve found a different number of eigenvalues than the inertia count");
}

double EigenCluster::mean() const {
  if (eigenvalues.empty()) return 0.0;
  return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0) / eigenvalues.size();
}

double EigenCluster::spread() const {
  if (eigenvalues.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
  return *hi - *lo;
}

Basis EigenCluster::matrix() const {
  if (basis.empty()) return Basis();
  Basis m(basis.front().grid.size(), dim());
  for (int j = 0; j < dim(); ++j) m.col(j) = basis[j].values;
  return m;
}

std::vector<EigenCluster> cluster(const std::vector<EigenPair>& pairs, double cluster_tol) {
  if (pairs.empty()) throw InvalidArgument("cluster: no eigenpairs");
  if (!(cluster_tol > 0.0)) throw InvalidArgument("solve.cluster_tol must be > 0");
  for (size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].value < pairs[i - 1].value) throw InvalidArgument("cluster: pairs are not sorted");

  std::vector<EigenCluster> out;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].value - pairs[i - 1].value > cluster_tol) {
      out.emplace_back();
      out.back().label = static_cast<int>(out.size()) - 1;
    }
    out.back().eigenvalues.push_back(pairs[i].value);
    out.back().basis.push_back(pairs[i].vector);
    out.back().residuals.push_back(pairs[i].residual);
  }
  for (auto& c : out) {
    const Grid& g = c.basis.front().grid;
    Basis m = c.matrix();
    const double w = g.weight();
    for (Index j = 0; j < m.cols(); ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (Index i = 0; i < j; ++i) m.col(j) -= (w * m.col(i).dot(m.col(j))) * m.col(i);
      m.col(j) /= std::sqrt(w) * m.col(j).norm();
      c.basis[j].values = m.col(j);
    }
  }
  return out;
}

EigenCluster bulk_cluster(const OperatorHandle& op, const std::vector<EigenPair>& pairs,
                          double edge_margin, double mass_tol, int label) {
  EigenCluster c;
  c.label = label;
  if (pairs.empty()) return c;
  const Grid& g = op.grid();
  const double w = g.weight();
  Basis u(g.size(), static_cast<Index>(pairs.size()));
  for (size_t j = 0; j < pairs.size(); ++j) u.col(j) = pairs[j].vector.values;

  RealField edge(g.size());
  const double cut = g.extent() - edge_margin;
  for (Index k = 0; k < g.size(); ++k) edge[k] = g.node(k).cwiseAbs().maxCoeff() > cut ? 1.0 : 0.0;
  const Eigen::MatrixXcd mass = w * u.adjoint() * edge.cast<Complex>().asDiagonal() * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (mass + mass.adjoint()));
  Index keep = 0;
  while (keep < em.eigenvalues().size() && em.eigenvalues()[keep] < mass_tol) ++keep;
  if (keep == 0) return c;

  Basis q = u * em.eigenvectors().leftCols(keep);
  Basis hq(q.rows(), q.cols());
  for (Index j = 0; j < keep; ++j) hq.col(j) = op.apply(q.col(j));
  const Eigen::MatrixXcd k = w * q.adjoint() * hq;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (k + k.adjoint()));
  const Basis z = q * es.eigenvectors();
  for (Index j = 0; j < keep; ++j) {
    GridFunction f(g, z.col(j) / (std::sqrt(w) * z.col(j).norm()));
    c.eigenvalues.push_back(es.eigenvalues()[j]);
    c.residuals.push_back(residual_norm(op, f, es.eigenvalues()[j]));
    c.basis.push_back(std::move(f));
  }
  return c;
}

double residual_norm(const OperatorHandle& op, const GridFunction& u, double mu) {
  const double un = u.values.norm();
  if (!(un > 0.0)) throw InvalidArgument("residual of the zero function");
  return (op.apply(u.values) - mu * u.values).norm() / un;
}

Eigen::VectorXd principal_angles(const Basis& a, const Basis& b, const Grid& g) {
  const Eigen::MatrixXcd c = g.weight() * a.adjoint() * b;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  const Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd ang(std::min(a.cols(), b.cols()));
  for (Index i = 0; i < ang.size(); ++i) ang[i] = std::acos(std::min(1.0, s[i]));
  std::sort(ang.data(), ang.data() + ang.size(), std::greater<double>());
  return ang;
}

}  // namespace landau
