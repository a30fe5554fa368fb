#include "landau/grid.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "landau/io.hpp"

namespace landau {

Grid::Grid(double extent_L, int n_per_side) : extent_(extent_L), n_(n_per_side) {
  if (!(extent_L > 0.0) || !std::isfinite(extent_L))
    throw InvalidArgument("grid.extent_L must be positive");
  if (n_per_side < 9 || n_per_side % 2 == 0)
    throw InvalidArgument("grid.n_per_side must be odd and >= 9");
  spacing_ = 2.0 * extent_L / (n_per_side - 1);
}

Index Grid::find_node(const Point& x) const {
  int idx[2];
  for (int j = 0; j < 2; ++j) {
    const double t = (x[j] + extent_) / spacing_;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r > n_ - 1) return -1;
    idx[j] = static_cast<int>(r);
  }
  return index(idx[0], idx[1]);
}

GridFunction::GridFunction(const Grid& g, Field v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size())
    throw InvalidArgument("grid function length " + std::to_string(values.size()) +
                          " does not match grid size " + std::to_string(g.size()));
}

GridFunction GridFunction::sample(const Grid& g, const std::function<Complex(const Point&)>& f) {
  GridFunction u(g);
  for (Index k = 0; k < g.size(); ++k) u.values[k] = f(g.node(k));
  return u;
}

Complex inner(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw InvalidArgument("inner: grids differ");
  return f.grid.weight() * f.values.dot(g.values);
}

RealField sample_real(const Grid& g, const std::function<double(const Point&)>& f) {
  RealField out(g.size());
  for (Index k = 0; k < g.size(); ++k) out[k] = f(g.node(k));
  return out;
}

void write_csv(const std::string& path, const GridFunction& u) {
  std::string s = "x1,x2,re,im\n";
  for (Index k = 0; k < u.grid.size(); ++k) {
    const Point x = u.grid.node(k);
    s += format_double(x[0]) + ',' + format_double(x[1]) + ',' + format_double(u.values[k].real()) +
         ',' + format_double(u.values[k].imag()) + '\n';
  }
  write_atomic(path, s);
}

void write_binary(const std::string& path, const GridFunction& u) {
  std::string s(static_cast<size_t>(u.grid.size()) * 4 * sizeof(double), '\0');
  char* p = s.data();
  for (Index k = 0; k < u.grid.size(); ++k) {
    const Point x = u.grid.node(k);
    const double row[4] = {x[0], x[1], u.values[k].real(), u.values[k].imag()};
    std::memcpy(p, row, sizeof row);
    p += sizeof row;
  }
  write_atomic(path, s);
}

void write_sidecar(const std::string& path, const Grid& g) {
  nlohmann::ordered_json j;
  j["extent_L"] = g.extent();
  j["n_per_side"] = g.n();
  write_atomic(path, j.dump(2) + "\n");
}

Grid read_sidecar(const std::string& path) {
  const auto j = nlohmann::json::parse(read_file(path));
  return Grid(j.at("extent_L").get<double>(), j.at("n_per_side").get<int>());
}

GridFunction read_csv(const std::string& path, const Grid& g) {
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  GridFunction u(g);
  Index k = 0;
  while (std::getline(in, line) && !line.empty()) {
    if (k >= g.size()) throw InvalidArgument(path + ": more rows than grid nodes");
    double v[4];
    std::istringstream row(line);
    for (double& x : v) {
      std::string cell;
      std::getline(row, cell, ',');
      x = std::stod(cell);
    }
    u.values[k++] = {v[2], v[3]};
  }
  if (k != g.size()) throw InvalidArgument(path + ": fewer rows than grid nodes");
  return u;
}

GridFunction read_binary(const std::string& path, const Grid& g) {
  const std::string s = read_file(path);
  if (s.size() != static_cast<size_t>(g.size()) * 4 * sizeof(double))
    throw InvalidArgument(path + ": size does not match grid");
  GridFunction u(g);
  const char* p = s.data();
  for (Index k = 0; k < g.size(); ++k) {
    double row[4];
    std::memcpy(row, p, sizeof row);
    p += sizeof row;
    u.values[k] = {row[2], row[3]};
  }
  return u;
}

}  // namespace landau
