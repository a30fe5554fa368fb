#include "landau/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace landau {

namespace {

double amplitude(const std::vector<double>& params, const char* kind) {
  if (params.size() > 1)
    throw InvalidArgument(std::string("potential.params: ") + kind + " takes one parameter (eps)");
  const double eps = params.empty() ? 0.0 : params[0];
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw InvalidArgument("potential.params: amplitude must be finite and >= 0");
  return eps;
}

// sup_x |8x^3 - 12x| e^{-x^2}; the critical points solve 4x^4 - 12x^2 + 3 = 0.
double gaussian_third_sup() {
  double best = 0.0;
  for (double s : {-1.0, 1.0}) {
    const double x2 = (12.0 + s * std::sqrt(144.0 - 48.0)) / 8.0;
    const double x = std::sqrt(x2);
    best = std::max(best, std::abs(8 * x2 * x - 12 * x) * std::exp(-x2));
  }
  return best;
}

// 1-D centered difference weights for derivative order d on offsets -2..2.
constexpr std::array<std::array<double, 5>, 5> kDiff = {{
    {0, 0, 1, 0, 0},
    {0, -0.5, 0, 0.5, 0},
    {0, 1, -2, 1, 0},
    {-0.5, 1, 0, -1, 0.5},
    {1, -4, 6, -4, 1},
}};

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::model_quadratic: return "model_quadratic";
    case PotentialKind::quadratic_plus_trig: return "quadratic_plus_trig";
    case PotentialKind::quadratic_plus_gaussian_bump: return "quadratic_plus_gaussian_bump";
    case PotentialKind::custom: return "custom";
  }
  return "custom";
}

PotentialKind parse_potential_kind(const std::string& name) {
  for (auto k : {PotentialKind::model_quadratic, PotentialKind::quadratic_plus_trig,
                 PotentialKind::quadratic_plus_gaussian_bump, PotentialKind::custom})
    if (to_string(k) == name) return k;
  throw InvalidArgument("potential.kind: unknown kind '" + name + "'");
}

Potential make_potential(PotentialKind kind, const std::vector<double>& params) {
  Potential p;
  p.kind = kind;
  p.params = params;
  switch (kind) {
    case PotentialKind::model_quadratic:
      if (!params.empty()) throw InvalidArgument("potential.params: model_quadratic takes none");
      p.value = [](const Point& x) { return x.squaredNorm(); };
      p.grad = [](const Point& x) { return Point(2 * x[0], 2 * x[1]); };
      p.laplacian = [](const Point&) { return 4.0; };
      p.deriv_bounds = {{2, 2.0}, {3, 0.0}, {4, 0.0}};
      break;
    case PotentialKind::quadratic_plus_trig: {
      const double eps = amplitude(params, "quadratic_plus_trig");
      p.value = [eps](const Point& x) {
        return x.squaredNorm() + eps * std::sin(x[0]) * std::cos(x[1]);
      };
      p.grad = [eps](const Point& x) {
        return Point(2 * x[0] + eps * std::cos(x[0]) * std::cos(x[1]),
                     2 * x[1] - eps * std::sin(x[0]) * std::sin(x[1]));
      };
      p.laplacian = [eps](const Point& x) {
        return 4.0 - 2 * eps * std::sin(x[0]) * std::cos(x[1]);
      };
      p.deriv_bounds = {{2, 2.0 + eps}, {3, eps}, {4, eps}};
      break;
    }
    case PotentialKind::quadratic_plus_gaussian_bump: {
      const double eps = amplitude(params, "quadratic_plus_gaussian_bump");
      p.value = [eps](const Point& x) {
        return x.squaredNorm() + eps * std::exp(-x.squaredNorm());
      };
      p.grad = [eps](const Point& x) {
        const double g = eps * std::exp(-x.squaredNorm());
        return Point(2 * x[0] - 2 * x[0] * g, 2 * x[1] - 2 * x[1] * g);
      };
      p.laplacian = [eps](const Point& x) {
        const double r2 = x.squaredNorm();
        return 4.0 + eps * (4 * r2 - 4) * std::exp(-r2);
      };
      // Second partials of e^{-|x|^2} are bounded by 2, fourth by 12.
      p.deriv_bounds = {{2, 2.0 + 2 * eps}, {3, eps * gaussian_third_sup()}, {4, 12 * eps}};
      break;
    }
    case PotentialKind::custom:
      throw InvalidArgument("potential.kind: custom potentials need make_custom_potential");
  }
  return p;
}

Potential make_custom_potential(std::function<double(const Point&)> value,
                                std::function<Point(const Point&)> grad,
                                std::function<double(const Point&)> laplacian,
                                std::map<int, double> deriv_bounds) {
  if (!value || !grad || !laplacian)
    throw InvalidArgument("custom potential needs value, gradient and Laplacian callables");
  for (int order : {2, 3, 4}) {
    auto it = deriv_bounds.find(order);
    if (it == deriv_bounds.end() || !(it->second >= 0.0))
      throw InvalidArgument("custom potential needs a bound C_" + std::to_string(order) + " >= 0");
  }
  Potential p;
  p.kind = PotentialKind::custom;
  p.value = std::move(value);
  p.grad = std::move(grad);
  p.laplacian = std::move(laplacian);
  p.deriv_bounds = std::move(deriv_bounds);
  return p;
}

std::vector<DerivativeBoundRow> check_derivative_bounds(const Potential& p, const Grid& g,
                                                        int max_order) {
  if (max_order < 2 || max_order > 4) throw InvalidArgument("max_order must be in [2, 4]");
  const int r = 2;
  if (g.n() < 2 * r + max_order + 1) throw InvalidArgument("grid too coarse for derivative check");

  const double d = g.spacing();
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<DerivativeBoundRow> rows;
  for (int order = 2; order <= max_order; ++order) {
    DerivativeBoundRow row;
    row.order = order;
    row.claimed = p.deriv_bounds.count(order) ? p.deriv_bounds.at(order) : 0.0;
    double scale = 0.0;
    for (int i1 = r; i1 < g.n() - r; ++i1) {
      for (int i2 = r; i2 < g.n() - r; ++i2) {
        std::array<std::array<double, 5>, 5> f{};
        for (int a = 0; a < 5; ++a)
          for (int b = 0; b < 5; ++b) {
            f[a][b] = p.value(Point(g.coord(i1 + a - r), g.coord(i2 + b - r)));
            scale = std::max(scale, std::abs(f[a][b]));
          }
        for (int a1 = 0; a1 <= order; ++a1) {
          const int a2 = order - a1;
          double s = 0.0;
          for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) s += kDiff[a1][a] * kDiff[a2][b] * f[a][b];
          row.observed = std::max(row.observed, std::abs(s) / std::pow(d, order));
        }
      }
    }
    // Each weight table sums |w| <= 16, so cancellation error is below 256 eps |phi| / d^order.
    row.floor = 256.0 * eps * scale / std::pow(d, order);
    row.pass = row.observed <= 1.05 * row.claimed + row.floor;
    rows.push_back(row);
  }
  return rows;
}

double boundary_envelope(const Potential& p, const Grid& g) {
  double worst = 0.0;
  const int last = g.n() - 1;
  for (int i = 0; i < g.n(); ++i) {
    for (auto [a, b] : {std::pair{i, 0}, std::pair{i, last}, std::pair{0, i}, std::pair{last, i}})
      worst = std::max(worst, std::exp(-p.value(Point(g.coord(a), g.coord(b)))));
  }
  return worst;
}

void check_truncation(const Potential& p, const Grid& g) {
  const double env = boundary_envelope(p, g);
  if (!(env < 1e-10))
    throw InvalidArgument("grid.extent_L: boundary envelope e^{-phi} = " + std::to_string(env) +
                          " is not below 1e-10");
}

}  // namespace landau
