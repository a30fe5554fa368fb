#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "landau/grid.hpp"
#include "landau/io.hpp"
#include "landau/norms.hpp"

using namespace landau;

namespace {

std::string scratch_dir() {
  const auto d = std::filesystem::temp_directory_path() / "landau_test_grid";
  std::filesystem::create_directories(d);
  return d.string();
}

GridFunction wavy(const Grid& g) {
  return GridFunction::sample(g, [](const Point& x) {
    return Complex(std::exp(-x.squaredNorm()) * std::cos(3 * x[0]), 0.1 * x[1] * std::exp(-x.squaredNorm()));
  });
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(6.0, 129);
  CHECK(g.spacing() == doctest::Approx(0.09375));
  CHECK(g.size() == 129 * 129);
  CHECK(g.coord(0) == -6.0);
  CHECK(g.coord(128) == doctest::Approx(6.0));
  CHECK(g.coord(64) == 0.0);
  CHECK(g.find_node(Point(0, 0)) == g.index(64, 64));
  CHECK(g.find_node(Point(0.09375, -0.1875)) == g.index(65, 62));
  CHECK(g.find_node(Point(0.05, 0)) == -1);
  CHECK(g.find_node(Point(7, 0)) == -1);
  const Point x = g.node(g.index(3, 100));
  CHECK(x[0] == doctest::Approx(g.coord(3)));
  CHECK(x[1] == doctest::Approx(g.coord(100)));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(6.0, 128), InvalidArgument);
  CHECK_THROWS_AS(Grid(6.0, 7), InvalidArgument);
  CHECK_THROWS_AS(Grid(0.0, 33), InvalidArgument);
  CHECK_THROWS_AS(Grid(-1.0, 33), InvalidArgument);
  CHECK_THROWS_AS(GridFunction(Grid(1.0, 9), Field::Zero(10)), InvalidArgument);
}

TEST_CASE("norms of a constant") {
  // Uniform cell weights: every node carries spacing^2.
  const Grid g(1.0, 9);
  const GridFunction one(g, Field::Ones(g.size()));
  const NormTriple t = norm_triple(one);
  CHECK(t.l2 == doctest::Approx(std::sqrt(81 * 0.0625)));
  CHECK(t.l6 == doctest::Approx(std::pow(81 * 0.0625, 1.0 / 6.0)));
  CHECK(t.linf == 1.0);
}

TEST_CASE("normalized Gaussian has linf / l2 = sqrt(2/pi)") {
  const Grid g(6.0, 129);
  const GridFunction u = GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-x.squaredNorm())); });
  const NormTriple t = norm_triple(u);
  CHECK(t.linf / t.l2 == doctest::Approx(std::sqrt(2 / M_PI)).epsilon(1e-3));
}

TEST_CASE("discrete Hoelder inequality l6 <= linf^{2/3} l2^{1/3}") {
  for (int n : {9, 33, 65}) {
    const Grid g(3.0, n);
    Field v = Field::Random(g.size());
    const NormTriple t = norm_triple(GridFunction(g, v));
    CHECK(t.l6 <= std::pow(t.linf, 2.0 / 3.0) * std::pow(t.l2, 1.0 / 3.0) * (1 + 1e-14));
  }
}

TEST_CASE("inner product is weighted and conjugate linear in the first slot") {
  const Grid g(2.0, 17);
  const GridFunction f = wavy(g);
  GridFunction h(g, Complex(0, 2) * f.values);
  CHECK(std::abs(inner(f, h) - Complex(0, 2) * inner(f, f)) < 1e-14);
  CHECK(std::abs(inner(h, f) - Complex(0, -2) * inner(f, f)) < 1e-14);
  CHECK(inner(f, f).real() == doctest::Approx(g.weight() * f.values.squaredNorm()));
  CHECK_THROWS_AS(inner(f, GridFunction(Grid(2.0, 19))), InvalidArgument);
}

TEST_CASE("CSV, binary and sidecar round trips are exact") {
  const Grid g(4.5, 33);
  const GridFunction u = wavy(g);
  const std::string d = scratch_dir();
  write_csv(d + "/u.csv", u);
  write_binary(d + "/u.bin", u);
  write_sidecar(d + "/grid.json", g);
  const Grid back = read_sidecar(d + "/grid.json");
  CHECK(back == g);
  CHECK(read_csv(d + "/u.csv", back).values == u.values);
  CHECK(read_binary(d + "/u.bin", back).values == u.values);
  CHECK_FALSE(std::filesystem::exists(d + "/u.csv.tmp"));
  CHECK(read_file(d + "/u.csv").rfind("x1,x2,re,im\n", 0) == 0);
  CHECK_THROWS_AS(read_binary(d + "/u.bin", Grid(4.5, 35)), InvalidArgument);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 2.0, -1e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(2.0) == "2");
}
