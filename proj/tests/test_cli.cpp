#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "landau/cli.hpp"
#include "landau/io.hpp"

using namespace landau;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "landau_test_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

json small_config(const fs::path& out) {
  json j = json::parse(R"({
    "potential": {"kind": "model_quadratic"},
    "grid": {"extent_L": 6.0, "n_per_side": 33},
    "solve": {"k": 4, "tol": 1e-6, "seed": 0},
    "sweep": {"max_level": 0, "restarts": 8},
    "output": {"formats": ["csv", "json"]}
  })");
  j["output"]["directory"] = out.string();
  return j;
}

// Runs the CLI binary and returns its exit status; stderr goes to err_file.
int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string(LANDAU_CLI_PATH) + " " + args + " > /dev/null 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string parse_error(json j) {
  try {
    parse_config(j);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

bool no_tmp_files(const fs::path& dir) {
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().extension() == ".tmp") return false;
  return true;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = parse_config(json::parse(R"({"potential": {"kind": "model_quadratic"}})"));
  CHECK(c.extent_L == 6.0);
  CHECK(c.n_per_side == 129);
  CHECK(c.k == 12);
  CHECK(c.restarts == 8);
  CHECK(c.wants("csv"));
  CHECK_FALSE(c.wants("binary"));
}

TEST_CASE("config errors name the offending field") {
  const json base = small_config("out");
  auto with = [&](const char* patch) {
    json j = base;
    j.merge_patch(json::parse(patch));
    return j;
  };
  CHECK(parse_error(json::object()).find("potential") == 0);
  CHECK(parse_error(with(R"({"grd": {}})")).find("grd: unknown key") == 0);
  CHECK(parse_error(with(R"({"grid": {"n_per_side": 64}})")).find("grid.n_per_side") == 0);
  CHECK(parse_error(with(R"({"grid": {"n_per_side": 7}})")).find("grid.n_per_side") == 0);
  CHECK(parse_error(with(R"({"grid": {"extent_L": 3.0}})")).find("grid.extent_L") == 0);
  CHECK(parse_error(with(R"({"solve": {"k": 0}})")).find("solve.k") == 0);
  CHECK(parse_error(with(R"({"solve": {"seed": -1}})")).find("solve.seed") == 0);
  CHECK(parse_error(with(R"({"solve": {"tol": 0}})")).find("solve.tol") == 0);
  CHECK(parse_error(with(R"({"sweep": {"restarts": 4}})")).find("sweep.restarts") == 0);
  CHECK(parse_error(with(R"({"lemmas": {"h_list": [0.5, 2.0]}})")).find("lemmas.h_list[1]") == 0);
  CHECK(parse_error(with(R"({"lemmas": {"q_list": [[1, 2, 3]]}})")).find("lemmas.q_list[0]") == 0);
  CHECK(parse_error(with(R"({"output": {"formats": ["xml"]}})")).find("output.formats") == 0);
  CHECK(parse_error(with(R"({"discretization": {"stencil_order": 3}})")).find("discretization.stencil_order") == 0);
  CHECK(parse_error(with(R"({"potential": {"kind": "custom"}})")).find("potential.kind") == 0);
  CHECK(parse_error(with(R"({"potential": {"kind": "quadratic_plus_trig", "params": [1, 2, 3, 4]}})"))
            .find("potential.params") == 0);
}

TEST_CASE("empty h_list is rejected before any work") {
  const fs::path d = scratch("empty_h");
  json j = small_config(d / "out");
  j["lemmas"] = {{"h_list", json::array()}};
  const fs::path cfg = write_config(d, j);
  CHECK(run_cli("lemmas --config " + cfg.string(), d / "err.txt") == 1);
  CHECK(read_file((d / "err.txt").string()).find("lemmas.h_list") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "out" / "lemmas.json"));
}

TEST_CASE("command-line errors exit with 1") {
  const fs::path d = scratch("bad_args");
  const fs::path cfg = write_config(d, small_config(d / "out"));
  CHECK(run_cli("spectrum --config " + (d / "missing.json").string(), d / "err.txt") == 1);
  CHECK(run_cli("spectrum --config " + cfg.string() + " --seed -3", d / "err.txt") == 1);
  CHECK(run_cli("frobnicate --config " + cfg.string(), d / "err.txt") == 1);
  CHECK(run_cli("spectrum", d / "err.txt") == 1);
}

TEST_CASE("spectrum output is byte-identical across runs") {
  const fs::path d = scratch("repeat");
  json j = small_config(d / "unused");
  j["grid"]["n_per_side"] = 97;  // 33 nodes are too coarse for the energy check
  const fs::path cfg = write_config(d, j);
  REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + (d / "a").string(), d / "err_a.txt") == 0);
  REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + (d / "b").string(), d / "err_b.txt") == 0);
  for (const char* f : {"spectrum.csv", "spectrum.json", "grid.json", "eigenfunction_000.csv"})
    CHECK(read_file((d / "a" / f).string()) == read_file((d / "b" / f).string()));
  CHECK(no_tmp_files(d));
  CHECK(read_file((d / "a" / "spectrum.csv").string()).rfind("index,eigenvalue,residual,energy_defect,cluster\n", 0) == 0);

  const json s = json::parse(read_file((d / "a" / "spectrum.json").string()));
  CHECK(s["schema_version"] == 1);
  CHECK(s["eigenpairs"].size() == 4);
  for (const auto& e : s["eigenpairs"]) CHECK(std::abs(e["eigenvalue"].get<double>()) <= 0.05);
}

TEST_CASE("bounds at level 0 only") {
  const fs::path d = scratch("bounds");
  json j = small_config(d / "out");
  j["grid"]["n_per_side"] = 65;
  const fs::path cfg = write_config(d, j);
  const int rc = run_cli("bounds --config " + cfg.string(), d / "err.txt");
  CHECK((rc == 0 || rc == 2));
  const std::string csv = read_file((d / "out" / "bounds.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const json b = json::parse(read_file((d / "out" / "bounds.json").string()));
  REQUIRE(b["levels"].size() == 1);
  CHECK(std::abs(b["levels"][0]["ratio_linf"].get<double>() - std::sqrt(2 / std::numbers::pi)) <= 0.05);
  CHECK(b["all_pass"] == (rc == 0));
  CHECK(no_tmp_files(d));
}

TEST_CASE("oracle-compare on a small grid") {
  const fs::path d = scratch("oracle");
  json j = small_config(d / "out");
  j["grid"]["n_per_side"] = 65;
  j["sweep"]["max_level"] = 1;
  const fs::path cfg = write_config(d, j);
  CHECK(run_cli("oracle-compare --config " + cfg.string(), d / "err.txt") == 0);
  CHECK(read_file((d / "out" / "oracle_compare.csv").string())
            .rfind("level,index,oracle_residual,principal_angle\n", 0) == 0);

  j["potential"] = {{"kind", "quadratic_plus_trig"}, {"params", {0.1}}};
  const fs::path cfg2 = write_config(d, j);
  CHECK(run_cli("oracle-compare --config " + cfg2.string(), d / "err2.txt") == 1);
}
