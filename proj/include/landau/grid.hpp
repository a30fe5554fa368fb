#pragma once

#include <functional>
#include <string>

#include "landau/types.hpp"

namespace landau {

/// Uniform square lattice on [-L, L]^2 with n nodes per axis.
///
/// n must be odd and >= 9 so the origin is a node. Node (i1, i2) sits at
/// (coord(i1), coord(i2)) and has flat index i1 * n + i2.
class Grid {
 public:
  Grid(double extent_L, int n_per_side);

  double extent() const { return extent_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  double weight() const { return spacing_ * spacing_; }
  Index size() const { return static_cast<Index>(n_) * n_; }

  double coord(int i) const { return -extent_ + i * spacing_; }
  Index index(int i1, int i2) const { return static_cast<Index>(i1) * n_ + i2; }
  Point node(Index k) const { return {coord(static_cast<int>(k / n_)), coord(static_cast<int>(k % n_))}; }

  /// Index of the node at x, or -1 if x is not a node (to within 1e-9 spacings).
  Index find_node(const Point& x) const;

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && extent_ == other.extent_;
  }

 private:
  double extent_;
  int n_;
  double spacing_;
};

/// Complex samples on a grid, zero outside it.
struct GridFunction {
  Grid grid;
  Field values;

  explicit GridFunction(const Grid& g) : grid(g), values(Field::Zero(g.size())) {}
  GridFunction(const Grid& g, Field v);

  static GridFunction sample(const Grid& g, const std::function<Complex(const Point&)>& f);
};

/// Discrete inner product sum_k w conj(f_k) g_k with w = spacing^2.
Complex inner(const GridFunction& f, const GridFunction& g);

/// Real samples of f on every node.
RealField sample_real(const Grid& g, const std::function<double(const Point&)>& f);

// Serialization: rows of (x1, x2, Re u, Im u) plus a JSON sidecar {extent_L, n_per_side}.
void write_csv(const std::string& path, const GridFunction& u);
void write_binary(const std::string& path, const GridFunction& u);
void write_sidecar(const std::string& path, const Grid& g);
Grid read_sidecar(const std::string& path);
GridFunction read_csv(const std::string& path, const Grid& g);
GridFunction read_binary(const std::string& path, const Grid& g);

}  // namespace landau
