#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/operators.hpp"
#include "landau/potential.hpp"

namespace landau {

enum class Subcommand { spectrum, bounds, lemmas, oracle_compare };

Subcommand parse_subcommand(const std::string& name);

/// Run configuration, read from strict JSON. Unknown keys are rejected and
/// every field is validated before any computation starts.
struct RunConfig {
  PotentialKind kind = PotentialKind::model_quadratic;
  std::vector<double> params;

  double extent_L = 6.0;
  int n_per_side = 129;

  int k = 12;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  double cluster_tol = 0.25;

  int max_level = 5;
  int restarts = 8;
  double window_half_width = 0.5;
  double edge_margin = 2.0;
  double edge_mass_tol = 1e-4;

  std::vector<double> h_list;
  std::vector<Point> q_list;
  // Cutoff-rate study on its own wide grid: the sup over a level needs states
  // out to the cutoff's transition zone, about 2/h of them.
  int rate_basis_size = 40;
  double rate_extent_L = 12.0;
  int rate_n_per_side = 241;

  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  Discretization disc;

  bool wants(const std::string& format) const;
};

/// Throws InvalidArgument with the dotted field name in the message.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Executes a subcommand and writes its artifacts under cfg.directory.
/// Returns 0 when every pass flag holds and 2 otherwise. Progress goes to log.
int run(Subcommand cmd, const RunConfig& cfg, std::ostream& log);

}  // namespace landau
