#include "landau/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>

#include "landau/eigensolve.hpp"
#include "landau/grid.hpp"
#include "landau/io.hpp"
#include "landau/model_oracle.hpp"
#include "landau/norms.hpp"
#include "landau/verify.hpp"

namespace landau {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw InvalidArgument(field + ": " + why);
}

// Rejects keys outside `allowed` so typos never pass silently.
void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

long long integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "must be an integer");
  return v.get<long long>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "must be an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
void opt(const json& obj, const char* key, F&& read) {
  if (const json* v = find(obj, key)) read(*v);
}

std::string fmt_point(const Point& q) {
  return "(" + format_double(q[0]) + "," + format_double(q[1]) + ")";
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  if (name == "spectrum") return Subcommand::spectrum;
  if (name == "bounds") return Subcommand::bounds;
  if (name == "lemmas") return Subcommand::lemmas;
  if (name == "oracle-compare") return Subcommand::oracle_compare;
  throw InvalidArgument("unknown subcommand '" + name + "'");
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  check_keys(j, "", {"potential", "grid", "solve", "sweep", "lemmas", "output", "discretization"});

  const json* pot = find(j, "potential");
  if (!pot) fail("potential", "section is required");
  check_keys(*pot, "potential", {"kind", "params"});
  const json* kind = find(*pot, "kind");
  if (!kind || !kind->is_string()) fail("potential.kind", "must be a string");
  try {
    c.kind = parse_potential_kind(kind->get<std::string>());
  } catch (const InvalidArgument&) {
    fail("potential.kind", "unknown kind '" + kind->get<std::string>() + "'");
  }
  if (c.kind == PotentialKind::custom) fail("potential.kind", "custom potentials are not available from a config");
  opt(*pot, "params", [&](const json& v) { c.params = numbers(v, "potential.params"); });

  if (const json* s = find(j, "grid")) {
    check_keys(*s, "grid", {"extent_L", "n_per_side"});
    opt(*s, "extent_L", [&](const json& v) { c.extent_L = number(v, "grid.extent_L"); });
    opt(*s, "n_per_side", [&](const json& v) {
      const long long n = integer(v, "grid.n_per_side");
      if (n < 9 || n > 2049 || n % 2 == 0) fail("grid.n_per_side", "must be odd and in [9, 2049]");
      c.n_per_side = static_cast<int>(n);
    });
  }

  if (const json* s = find(j, "solve")) {
    check_keys(*s, "solve", {"k", "tol", "seed", "cluster_tol"});
    opt(*s, "k", [&](const json& v) {
      const long long k = integer(v, "solve.k");
      if (k < 1 || k > 200) fail("solve.k", "must be in [1, 200]");
      c.k = static_cast<int>(k);
    });
    opt(*s, "tol", [&](const json& v) { c.tol = number(v, "solve.tol"); });
    opt(*s, "seed", [&](const json& v) {
      const long long s = integer(v, "solve.seed");
      if (s < 0) fail("solve.seed", "must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    });
    opt(*s, "cluster_tol", [&](const json& v) { c.cluster_tol = number(v, "solve.cluster_tol"); });
  }

  if (const json* s = find(j, "sweep")) {
    check_keys(*s, "sweep", {"max_level", "restarts", "window_half_width", "edge_margin", "edge_mass_tol"});
    opt(*s, "max_level", [&](const json& v) {
      const long long m = integer(v, "sweep.max_level");
      if (m < 0 || m > 40) fail("sweep.max_level", "must be in [0, 40]");
      c.max_level = static_cast<int>(m);
    });
    opt(*s, "restarts", [&](const json& v) {
      const long long r = integer(v, "sweep.restarts");
      if (r < 8 || r > 10000) fail("sweep.restarts", "must be in [8, 10000]");
      c.restarts = static_cast<int>(r);
    });
    opt(*s, "window_half_width", [&](const json& v) { c.window_half_width = number(v, "sweep.window_half_width"); });
    opt(*s, "edge_margin", [&](const json& v) { c.edge_margin = number(v, "sweep.edge_margin"); });
    opt(*s, "edge_mass_tol", [&](const json& v) { c.edge_mass_tol = number(v, "sweep.edge_mass_tol"); });
  }

  if (const json* s = find(j, "lemmas")) {
    check_keys(*s, "lemmas", {"h_list", "q_list", "rate_basis_size", "rate_extent_L", "rate_n_per_side"});
    opt(*s, "h_list", [&](const json& v) { c.h_list = numbers(v, "lemmas.h_list"); });
    opt(*s, "q_list", [&](const json& v) {
      if (!v.is_array()) fail("lemmas.q_list", "must be an array of [x1, x2] pairs");
      for (size_t i = 0; i < v.size(); ++i) {
        const std::string f = "lemmas.q_list[" + std::to_string(i) + "]";
        const auto xy = numbers(v[i], f);
        if (xy.size() != 2) fail(f, "must have two coordinates");
        c.q_list.emplace_back(xy[0], xy[1]);
      }
    });
    opt(*s, "rate_basis_size", [&](const json& v) {
      const long long b = integer(v, "lemmas.rate_basis_size");
      if (b < 1 || b > 200) fail("lemmas.rate_basis_size", "must be in [1, 200]");
      c.rate_basis_size = static_cast<int>(b);
    });
    opt(*s, "rate_extent_L", [&](const json& v) {
      c.rate_extent_L = number(v, "lemmas.rate_extent_L");
      if (!(c.rate_extent_L > 0.0)) fail("lemmas.rate_extent_L", "must be > 0");
    });
    opt(*s, "rate_n_per_side", [&](const json& v) {
      const long long n = integer(v, "lemmas.rate_n_per_side");
      if (n < 9 || n > 2049 || n % 2 == 0) fail("lemmas.rate_n_per_side", "must be odd and in [9, 2049]");
      c.rate_n_per_side = static_cast<int>(n);
    });
  }

  if (const json* s = find(j, "output")) {
    check_keys(*s, "output", {"directory", "formats"});
    opt(*s, "directory", [&](const json& v) {
      if (!v.is_string() || v.get<std::string>().empty()) fail("output.directory", "must be a non-empty string");
      c.directory = v.get<std::string>();
    });
    opt(*s, "formats", [&](const json& v) {
      if (!v.is_array() || v.empty()) fail("output.formats", "must be a non-empty array");
      c.formats.clear();
      for (const auto& f : v) {
        if (!f.is_string()) fail("output.formats", "entries must be strings");
        const std::string name = f.get<std::string>();
        if (name != "csv" && name != "json" && name != "binary")
          fail("output.formats", "unknown format '" + name + "' (csv, json, binary)");
        c.formats.push_back(name);
      }
    });
  }

  if (const json* s = find(j, "discretization")) {
    check_keys(*s, "discretization", {"stencil_order", "doubler_lift", "filter_power"});
    opt(*s, "stencil_order", [&](const json& v) {
      const long long o = integer(v, "discretization.stencil_order");
      if (o != 2 && o != 4 && o != 6) fail("discretization.stencil_order", "must be 2, 4 or 6");
      c.disc.stencil_order = static_cast<int>(o);
    });
    opt(*s, "doubler_lift", [&](const json& v) { c.disc.doubler_lift = number(v, "discretization.doubler_lift"); });
    opt(*s, "filter_power", [&](const json& v) {
      const long long fp = integer(v, "discretization.filter_power");
      if (fp < 0 || fp > 64) fail("discretization.filter_power", "must be in [0, 64]");
      c.disc.filter_power = static_cast<int>(fp);
    });
  }

  // Ranges and cross-field checks.
  if (!(c.extent_L > 0.0)) fail("grid.extent_L", "must be > 0");
  if (!(c.tol >= 1e-8 && c.tol < 1.0)) fail("solve.tol", "must be in [1e-8, 1)");
  if (!(c.cluster_tol > 0.0)) fail("solve.cluster_tol", "must be > 0");
  if (!(c.window_half_width > 0.0 && c.window_half_width < 1.0))
    fail("sweep.window_half_width", "must be in (0, 1)");
  if (!(c.edge_margin >= 0.0 && c.edge_margin < c.extent_L)) fail("sweep.edge_margin", "must be in [0, extent_L)");
  if (!(c.edge_mass_tol > 0.0 && c.edge_mass_tol < 1.0)) fail("sweep.edge_mass_tol", "must be in (0, 1)");
  for (size_t i = 0; i < c.h_list.size(); ++i)
    if (!(c.h_list[i] > 0.0 && c.h_list[i] <= 1.0))
      fail("lemmas.h_list[" + std::to_string(i) + "]", "must be in (0, 1]");
  if (!(c.disc.doubler_lift >= 0.0)) fail("discretization.doubler_lift", "must be >= 0");

  // make_potential already names potential.params in its messages.
  const Potential p = make_potential(c.kind, c.params);
  const Grid g(c.extent_L, c.n_per_side);
  check_truncation(p, g);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw InvalidArgument("config: " + std::string(e.what()));
  }
  json j;
  try {
    j = json::parse(text, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config: not valid JSON (" + std::string(e.what()) + ")");
  }
  return parse_config(j);
}

namespace {

struct Context {
  const RunConfig& cfg;
  Potential p;
  Grid g;
  EigenOptions solve;
  std::filesystem::path dir;
  std::ostream& log;

  std::string path(const std::string& name) const { return (dir / name).string(); }
};

EigenOptions solve_options(const RunConfig& c) {
  EigenOptions o;
  o.tol = c.tol;
  o.seed = c.seed;
  return o;
}

void write_json(const Context& ctx, const std::string& name, const ojson& j) {
  write_atomic(ctx.path(name), j.dump(2) + "\n");
}

ojson rows_json(const std::vector<LemmaRow>& rows) {
  ojson a = ojson::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return a;
}

std::string rows_csv(const std::vector<LemmaRow>& rows) {
  std::string s = "lemma_id,detail,lhs,rhs,pass\n";
  for (const auto& r : rows)
    s += r.lemma_id + ",\"" + r.detail + "\"," + format_double(r.lhs) + ',' + format_double(r.rhs) + ',' +
         (r.pass ? "1" : "0") + '\n';
  return s;
}

bool all_rows_pass(const std::vector<LemmaRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.pass; });
}

int run_spectrum(const Context& ctx) {
  const auto& c = ctx.cfg;
  const OperatorHandle h = build_operator(OperatorLabel::H, ctx.p, ctx.g, std::nullopt, std::nullopt, c.disc);
  ctx.log << "spectrum: " << c.k << " lowest eigenpairs on " << c.n_per_side << "^2 nodes\n";
  const auto pairs = lowest_eigenpairs(h, c.k, ctx.solve);
  const auto clusters = cluster(pairs, c.cluster_tol);

  std::vector<LemmaRow> rows;
  ojson manifest;
  manifest["schema_version"] = 1;
  manifest["potential"] = {{"kind", to_string(c.kind)}, {"params", c.params}};
  manifest["grid"] = {{"extent_L", c.extent_L}, {"n_per_side", c.n_per_side}};
  manifest["tol"] = c.tol;
  manifest["seed"] = c.seed;
  manifest["eigenpairs"] = ojson::array();

  std::string csv = "index,eigenvalue,residual,energy_defect,cluster\n";
  write_sidecar(ctx.path("grid.json"), ctx.g);
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    int label = 0;
    for (const auto& cl : clusters)
      for (double v : cl.eigenvalues)
        if (v == pr.value) label = cl.label;
    const double defect = energy_identity_defect(ctx.p, pr.vector, pr.value, c.disc);
    const std::string id = std::to_string(i);
    rows.push_back(make_row("solver_residual", "eigenpair " + id, pr.residual,
                            c.tol * std::max(1.0, std::abs(pr.value))));
    rows.push_back(make_row("energy_identity", "eigenpair " + id, defect, 1e-3));

    char stem[32];
    std::snprintf(stem, sizeof stem, "eigenfunction_%03zu", i);
    ojson e;
    e["index"] = i;
    e["eigenvalue"] = pr.value;
    e["residual"] = pr.residual;
    e["energy_defect"] = defect;
    e["cluster"] = label;
    ojson files = ojson::array();
    if (c.wants("csv")) {
      write_csv(ctx.path(std::string(stem) + ".csv"), pr.vector);
      files.push_back(std::string(stem) + ".csv");
    }
    if (c.wants("binary")) {
      write_binary(ctx.path(std::string(stem) + ".bin"), pr.vector);
      files.push_back(std::string(stem) + ".bin");
    }
    e["files"] = files;
    manifest["eigenpairs"].push_back(e);
    csv += id + ',' + format_double(pr.value) + ',' + format_double(pr.residual) + ',' + format_double(defect) +
           ',' + std::to_string(label) + '\n';
  }
  manifest["clusters"] = ojson::array();
  for (const auto& cl : clusters)
    manifest["clusters"].push_back(
        {{"label", cl.label}, {"dim", cl.dim()}, {"mean", cl.mean()}, {"spread", cl.spread()}});
  manifest["checks"] = rows_json(rows);
  const bool pass = all_rows_pass(rows);
  manifest["all_pass"] = pass;

  if (c.wants("csv")) write_atomic(ctx.path("spectrum.csv"), csv);
  if (c.wants("json")) write_json(ctx, "spectrum.json", manifest);
  for (const auto& cl : clusters)
    ctx.log << "  cluster " << cl.label << ": dim " << cl.dim() << ", mean " << format_double(cl.mean()) << "\n";
  return pass ? 0 : 2;
}

int run_bounds(const Context& ctx) {
  const auto& c = ctx.cfg;
  SweepOptions o;
  o.max_level = c.max_level;
  o.window_half_width = c.window_half_width;
  o.edge_margin = c.edge_margin;
  o.edge_mass_tol = c.edge_mass_tol;
  o.solve = ctx.solve;
  o.ascent.restarts = c.restarts;
  o.ascent.seed = c.seed;
  o.disc = c.disc;
  ctx.log << "bounds: levels 0.." << c.max_level << "\n";
  const BoundReport rep = sweep_bounds(ctx.p, ctx.g, o);
  if (c.wants("csv")) write_atomic(ctx.path("bounds.csv"), to_csv(rep));
  if (c.wants("json")) write_json(ctx, "bounds.json", to_json(rep));
  for (const auto& l : rep.levels)
    ctx.log << "  level " << l.level << ": dim " << l.cluster_dim << ", linf " << format_double(l.ratio_linf)
            << ", scaled l6 " << format_double(l.scaled_l6) << "\n";
  for (const auto& w : rep.warnings) ctx.log << "  warning: " << w << "\n";
  return rep.all_pass() ? 0 : 2;
}

bool has_margin(const Grid& g, const Point& q) {
  return std::abs(q[0]) + 2.0 <= g.extent() + 1e-12 && std::abs(q[1]) + 2.0 <= g.extent() + 1e-12;
}

int run_lemmas(const Context& ctx) {
  const auto& c = ctx.cfg;
  std::vector<LemmaRow> rows;
  std::vector<std::string> warnings;

  for (const auto& d : check_derivative_bounds(ctx.p, ctx.g, 4))
    rows.push_back(make_row("derivative_bound", "order " + std::to_string(d.order), d.observed,
                            1.05 * d.claimed + d.floor));

  const OperatorHandle hop = build_operator(OperatorLabel::H, ctx.p, ctx.g, std::nullopt, std::nullopt, c.disc);
  std::vector<Point> centers = c.q_list.empty() ? std::vector<Point>{Point::Zero()} : c.q_list;

  ojson per_h = ojson::array();
  for (double h : c.h_list) {
    // The H-eigenpair nearest 1/h, rescaled, is an exact P-eigenfunction for h_eff = 1/mu.
    const auto pairs = nearest_eigenpairs(hop, 1.0 / h, 1, ctx.solve);
    const EigenPair& pr = pairs.front();
    if (!(pr.value > 0.0)) {
      warnings.push_back("h=" + format_double(h) + ": nearest eigenvalue is not positive; skipped");
      continue;
    }
    const double heff = 1.0 / pr.value;
    ctx.log << "lemmas: h=" << format_double(h) << " uses eigenvalue " << format_double(pr.value) << "\n";

    GridFunction uh = rescale(pr.vector, heff, RescaleDirection::to_semiclassical);
    const Grid& gs = uh.grid;
    uh.values /= std::sqrt(gs.weight()) * uh.values.norm();

    std::vector<Point> ok;
    for (const Point& q : centers) {
      if (has_margin(gs, q)) ok.push_back(q);
      else
        warnings.push_back("h=" + format_double(h) + ": center " + fmt_point(q) +
                           " is within distance 2 of the semiclassical boundary; skipped");
    }
    for (auto& r : check_cutoff_lemma(ctx.p, gs, uh, heff, ok, 1, c.disc)) rows.push_back(r);

    const OperatorHandle pop = build_operator(OperatorLabel::P, ctx.p, gs, heff, std::nullopt, c.disc);
    EigenCluster one;
    one.eigenvalues.push_back(gs.weight() * uh.values.dot(pop.apply(uh.values)).real());
    one.basis.push_back(uh);
    one.residuals.push_back(0.0);
    for (auto& r : check_energy_lemma(ctx.p, gs, one, heff, c.disc)) rows.push_back(r);

    for (const Point& q : centers) {
      if (ctx.g.find_node(q) < 0 || !has_margin(ctx.g, q)) {
        warnings.push_back("gauge lemma: center " + fmt_point(q) +
                           " is not a grid node at distance >= 2 from the boundary; skipped");
        continue;
      }
      for (auto& r : check_gauge_lemma(ctx.p, ctx.g, pr.vector, q, c.disc)) {
        r.detail += " h=" + format_double(h);
        rows.push_back(r);
      }
    }
    per_h.push_back({{"h", h}, {"eigenvalue", pr.value}, {"h_eff", heff}, {"residual", pr.residual}});
  }

  ojson rate;
  if (c.kind == PotentialKind::model_quadratic && c.h_list.size() >= 2) {
    bool levels_ok = true;
    for (double h : c.h_list) {
      const double n = 1.0 / (2.0 * h);
      levels_ok = levels_ok && std::abs(n - std::round(n)) <= 1e-9;
    }
    if (levels_ok) {
      const RateStudy rs =
          cutoff_rate_study(Grid(c.rate_extent_L, c.rate_n_per_side), c.h_list, c.rate_basis_size, c.disc);
      for (const auto& r : rs.rows) rows.push_back(r);
      rows.push_back(make_row("cutoff_rate", "log-log slope " + format_double(rs.slope),
                              std::abs(rs.slope - 1.0), 0.15));
      rate["h"] = rs.h;
      rate["slope"] = rs.slope;
      rate["fine_slope"] = rs.fine_slope;
    } else {
      warnings.push_back("rate study needs every h with 1/(2h) an integer; skipped");
    }
  }

  const bool pass = all_rows_pass(rows);
  ojson j;
  j["schema_version"] = 1;
  j["potential"] = {{"kind", to_string(c.kind)}, {"params", c.params}};
  j["grid"] = {{"extent_L", c.extent_L}, {"n_per_side", c.n_per_side}};
  j["eigenpairs"] = per_h;
  if (!rate.is_null()) j["rate_study"] = rate;
  j["lemmas"] = rows_json(rows);
  j["warnings"] = warnings;
  j["all_pass"] = pass;
  if (c.wants("json")) write_json(ctx, "lemmas.json", j);
  if (c.wants("csv")) write_atomic(ctx.path("lemmas.csv"), rows_csv(rows));
  for (const auto& w : warnings) ctx.log << "  warning: " << w << "\n";
  ctx.log << "  " << std::count_if(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.pass; }) << "/"
          << rows.size() << " rows pass\n";
  return pass ? 0 : 2;
}

int run_oracle_compare(const Context& ctx) {
  const auto& c = ctx.cfg;
  const OperatorHandle hop = build_operator(OperatorLabel::H, ctx.p, ctx.g, std::nullopt, std::nullopt, c.disc);
  std::vector<LemmaRow> rows;
  std::string csv = "level,index,oracle_residual,principal_angle\n";
  ojson levels = ojson::array();

  for (int n = 0; n <= c.max_level; ++n) {
    const Basis orc = level_basis(n, c.k, ctx.g, LadderSource::raised, c.disc);
    const auto pairs = window_eigenpairs(hop, 2.0 * n - c.window_half_width, 2.0 * n + c.window_half_width, ctx.solve);
    const EigenCluster bulk = bulk_cluster(hop, pairs, c.edge_margin, c.edge_mass_tol, n);
    ctx.log << "oracle-compare: level " << n << ", " << pairs.size() << " eigenpairs, bulk " << bulk.dim() << "\n";
    if (bulk.dim() < orc.cols()) {
      rows.push_back(make_row("oracle_angle", "level " + std::to_string(n) + " bulk smaller than oracle",
                              1.0, 1e-2));
      continue;
    }
    const Eigen::VectorXd ang = principal_angles(orc, bulk.matrix(), ctx.g);
    double worst_res = 0.0;
    for (Index m = 0; m < orc.cols(); ++m) {
      const double r = residual_norm(hop, GridFunction(ctx.g, orc.col(m)), 2.0 * n);
      worst_res = std::max(worst_res, r);
      csv += std::to_string(n) + ',' + std::to_string(m) + ',' + format_double(r) + ',' + format_double(ang[m]) + '\n';
    }
    rows.push_back(make_row("oracle_angle", "level " + std::to_string(n), ang.maxCoeff(), 1e-2));
    levels.push_back({{"level", n},
                      {"oracle_size", orc.cols()},
                      {"window_count", pairs.size()},
                      {"bulk_dim", bulk.dim()},
                      {"max_oracle_residual", worst_res},
                      {"max_principal_angle", ang.maxCoeff()}});
  }
  const bool pass = all_rows_pass(rows);
  if (c.wants("csv")) write_atomic(ctx.path("oracle_compare.csv"), csv);
  if (c.wants("json")) {
    ojson j;
    j["schema_version"] = 1;
    j["grid"] = {{"extent_L", c.extent_L}, {"n_per_side", c.n_per_side}};
    j["levels"] = levels;
    j["checks"] = rows_json(rows);
    j["all_pass"] = pass;
    write_json(ctx, "oracle_compare.json", j);
  }
  return pass ? 0 : 2;
}

}  // namespace

int run(Subcommand cmd, const RunConfig& cfg, std::ostream& log) {
  try {
    // Subcommand-specific requirements, checked before any solve.
    if (cmd == Subcommand::lemmas) {
      if (cfg.h_list.empty()) fail("lemmas.h_list", "must not be empty for the lemmas subcommand");
      for (size_t i = 0; i < cfg.q_list.size(); ++i)
        if (!has_margin(Grid(cfg.extent_L, cfg.n_per_side), cfg.q_list[i]))
          fail("lemmas.q_list[" + std::to_string(i) + "]", "must lie at distance >= 2 from the boundary");
    }
    if (cmd == Subcommand::oracle_compare && cfg.kind != PotentialKind::model_quadratic)
      fail("potential.kind", "oracle-compare needs model_quadratic");

    Context ctx{cfg, make_potential(cfg.kind, cfg.params), Grid(cfg.extent_L, cfg.n_per_side),
                solve_options(cfg), cfg.directory, log};
    check_truncation(ctx.p, ctx.g);
    std::error_code ec;
    std::filesystem::create_directories(ctx.dir, ec);
    if (ec || !std::filesystem::is_directory(ctx.dir))
      fail("output.directory", "cannot create '" + cfg.directory + "'");

    switch (cmd) {
      case Subcommand::spectrum: return run_spectrum(ctx);
      case Subcommand::bounds: return run_bounds(ctx);
      case Subcommand::lemmas: return run_lemmas(ctx);
      case Subcommand::oracle_compare: return run_oracle_compare(ctx);
    }
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    log << "solver failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace landau
