#include "commands.hpp"

#include "config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace curvedborn::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
};

struct Example1Options {
  double omega = 1.0;
  double r_max = 2.0;
  int grid = 20;
  double tau_max = 12.0;
  int frames = 25;
  std::string integrator = "analytic";
  double step = 0.0;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with a header row and a `<file>.json` sidecar describing how it was made.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, std::vector<std::string> columns, const json& meta) : columns_(std::move(columns)) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
    write_row(columns_);
    json sidecar = meta;
    sidecar["columns"] = columns_;
    sidecar["file"] = path.filename().string();
    std::ofstream side(path.string() + ".json", std::ios::binary);
    side << sidecar.dump(2) << '\n';
  }

  void write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) file_ << (i ? "," : "") << cells[i];
    file_ << '\n';
    ++rows_;
  }

  std::size_t rows() const { return rows_ > 0 ? rows_ - 1 : 0; }

 private:
  std::vector<std::string> columns_;
  std::ofstream file_;
  std::size_t rows_ = 0;
};

void write_json(const fs::path& path, const json& doc) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  f << doc.dump(2) << '\n';
}

ExperimentConfig load(const Globals& g) {
  ExperimentConfig cfg = g.config_path.empty() ? parse_config(json::object()) : load_config(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.raw["seed"] = *g.seed;
  }
  if (g.resolution) {
    if (*g.resolution < 2) throw Error(ErrorKind::ConfigError, "resolution must be >= 2");
    cfg.resolution = *g.resolution;
    cfg.raw["resolution"] = *g.resolution;
  }
  return cfg;
}

json meta(const std::string& command, const json& config) { return json{{"command", command}, {"config", config}}; }

FlowOptions flow_options(const FlowConfig& f) {
  FlowOptions o;
  o.integrator = f.integrator;
  o.step = f.step;
  if (f.field == "example1") o.field = example1_field(f.omega);
  return o;
}

double vget(const json& verify, const char* key) {
  const json& v = verify.contains(key) ? verify.at(key) : default_config().at("verify").at(key);
  if (!v.is_number()) throw Error(ErrorKind::ConfigError, std::string("verify.") + key + " must be a number");
  return v.get<double>();
}

std::vector<std::string> point_columns(int dim) {
  return dim == 3 ? std::vector<std::string>{"t", "x", "y"} : std::vector<std::string>{"t", "x", "y", "z"};
}

// ---------------------------------------------------------------- example1

int cmd_example1(const Example1Options& o, const Globals& g, std::ostream& out) {
  if (!(o.omega > 0.0)) throw Error(ErrorKind::ConfigError, "omega must be positive");
  if (!(o.r_max > 0.0)) throw Error(ErrorKind::ConfigError, "r-max must be positive");
  if (o.grid < 1) throw Error(ErrorKind::ConfigError, "grid must be >= 1");
  if (!(o.tau_max > 0.0)) throw Error(ErrorKind::ConfigError, "tau-max must be positive");
  if (o.frames < 1) throw Error(ErrorKind::ConfigError, "frames must be >= 1");
  if (o.integrator != "analytic" && o.integrator != "rk4") {
    throw Error(ErrorKind::ConfigError, "integrator must be analytic or rk4");
  }

  const json options{{"omega", o.omega}, {"r_max", o.r_max},   {"grid", o.grid},       {"tau_max", o.tau_max},
                     {"frames", o.frames}, {"integrator", o.integrator}, {"step", o.step}};
  const Spacetime st = minkowski(3);
  FlowMap fm;
  fm.field = example1_field(o.omega);
  fm.integrator = o.integrator == "rk4" ? Integrator::RK4 : Integrator::AnalyticIfAvailable;
  fm.step = o.step > 0.0 ? o.step : default_rk4_step(o.tau_max);
  const ParametrizedHypersurface disk = disk_polar(o.r_max, o.grid, o.grid);

  const fs::path dir(g.out_dir);
  CsvWriter crossing(dir / "example1_crossing.csv", {"r0", "tau_analytic", "tau_numeric", "abs_diff"},
                     meta("example1", options));
  double max_diff = 0.0;
  for (int k = 1; k <= o.grid; ++k) {
    const double r0 = o.r_max * k / o.grid;
    const std::optional<double> tau = lightlike_crossing(st, fm, disk, make_vec({r0, 0.0}), make_vec({1.0, 0.0}), o.tau_max);
    if (!tau) continue;
    const double analytic = example1_crossing_time(o.omega, r0);
    const double diff = std::abs(*tau - analytic);
    max_diff = std::max(max_diff, diff);
    crossing.write_row({num(r0), num(analytic), num(*tau), num(diff)});
  }

  std::vector<double> taus(static_cast<std::size_t>(o.frames));
  for (int k = 0; k < o.frames; ++k) taus[static_cast<std::size_t>(k)] = o.frames == 1 ? 0.0 : o.tau_max * k / (o.frames - 1);
  CsvWriter frames(dir / "example1_frames.csv", {"tau", "r0", "theta", "t", "x", "y", "causal_class"},
                   meta("example1", options));
  for (const SweepRow& row : causal_sweep(st, fm, disk, taus)) {
    frames.write_row({num(row.tau), num(row.param[0]), num(row.param[1]), num(row.point[0]), num(row.point[1]),
                      num(row.point[2]), std::string(to_string(row.character))});
  }

  out << json{{"command", "example1"},
              {"options", options},
              {"crossing_rows", crossing.rows()},
              {"max_abs_diff", max_diff},
              {"frame_rows", frames.rows()},
              {"files", {"example1_crossing.csv", "example1_frames.csv"}}}
             .dump(2)
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify

struct Suite {
  bool pass = false;
  json detail;
};

Suite suite_normalization(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h, const json& v) {
  const double tol = vget(v, "normalization_tolerance");
  const IntegralResult p = born_probability(st, c.current, h);
  Suite s;
  s.pass = std::abs(p.value - 1.0) <= tol && p.error_budget() <= tol;
  s.detail = {{"value", p.value},
              {"residual", std::abs(p.value - 1.0)},
              {"error_estimate", p.error_estimate},
              {"truncation_estimate", p.truncation_estimate},
              {"tolerance", tol}};
  return s;
}

Suite suite_identity(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h, const json& v) {
  const double tol = vget(v, "identity_tolerance");
  const double point_tol = vget(v, "pointwise_tolerance");
  const SpacelikeIdentityReport r = verify_spacelike_identity(st, c.current, h, RegionSpec::full(h));
  Suite s;
  s.pass = r.rel_diff <= tol && r.max_pointwise_rel_diff <= point_tol;
  s.detail = {{"lhs", r.lhs.value},
              {"rhs", r.rhs.value},
              {"relative_residual", r.rel_diff},
              {"max_pointwise_relative_residual", r.max_pointwise_rel_diff},
              {"compared_nodes", r.compared_nodes},
              {"error_estimate", r.rhs.error_budget()},
              {"tolerance", tol},
              {"pointwise_tolerance", point_tol}};
  return s;
}

Suite suite_sweep(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                  const ExperimentConfig& cfg, const fs::path& dir) {
  const double tol = vget(cfg.verify, "drift_tolerance");
  const std::vector<double> taus = cfg.flow.tau_grid();
  const ConservationReport r = conservation_sweep(st, c, h, taus, flow_options(cfg.flow));
  CsvWriter csv(dir / "verify_conservation.csv", {"tau", "total", "error_estimate", "residual"},
                meta("verify", cfg.raw));
  for (std::size_t k = 0; k < r.tau.size(); ++k) {
    csv.write_row({num(r.tau[k]), num(r.totals[k]), num(r.error_estimates[k]), num(r.residuals[k])});
  }
  Suite s;
  s.pass = r.max_drift <= tol;
  s.detail = {{"max_drift", r.max_drift}, {"max_error_estimate", r.max_error_estimate}, {"tolerance", tol}};
  return s;
}

Suite suite_reynolds(const Spacetime& st, const ExperimentConfig& cfg, const ParametrizedHypersurface& h,
                     const fs::path& dir) {
  const json& v = cfg.verify;
  const double tol = vget(v, "reynolds_tolerance");
  const double spacing = vget(v, "reynolds_spacing");
  const double tau_max = vget(v, "reynolds_tau_max");
  if (!(spacing > 0.0) || !(tau_max >= 2.0 * spacing)) {
    throw Error(ErrorKind::ConfigError, "reynolds_tau_max must span at least two reynolds_spacing steps");
  }
  const json current_spec = v.contains("reynolds_current") && !v.at("reynolds_current").is_null()
                                ? v.at("reynolds_current")
                                : cfg.current;
  const CurrentSpec c = build_current(st, current_spec, cfg.seed);
  const auto n = static_cast<int>(std::lround(tau_max / spacing));
  std::vector<double> taus(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) taus[static_cast<std::size_t>(k)] = k * spacing;
  FlowOptions options;
  options.integrator = cfg.flow.integrator;
  options.step = cfg.flow.step;
  const ConservationReport r = reynolds_check(st, c, h, taus, options);
  CsvWriter csv(dir / "verify_reynolds.csv", {"tau", "total", "error_estimate", "residual", "derivative", "source"},
                meta("verify", cfg.raw));
  for (std::size_t k = 0; k < r.tau.size(); ++k) {
    csv.write_row({num(r.tau[k]), num(r.totals[k]), num(r.error_estimates[k]), num(r.residuals[k]),
                   num(r.derivatives[k]), num(r.sources[k])});
  }
  Suite s;
  s.pass = r.max_residual <= tol;
  s.detail = {{"current", c.name},
              {"max_residual", r.max_residual},
              {"max_error_estimate", r.max_error_estimate},
              {"spacing", spacing},
              {"tolerance", tol}};
  return s;
}

Suite suite_divergence(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                       const ExperimentConfig& cfg) {
  const double cap_tol = vget(cfg.verify, "cap_tolerance");
  const double tube_tol = vget(cfg.verify, "tube_tolerance");
  const auto tau = cfg.verify.contains("cylinder_tau") ? cfg.verify.at("cylinder_tau").get<std::vector<double>>()
                                                       : std::vector<double>{0.0, 1.0};
  if (tau.size() != 2) throw Error(ErrorKind::ConfigError, "verify.cylinder_tau must be [tau0, tau1]");
  FlowCylinder cyl{h, build_flow(cfg.flow, c), tau[0], tau[1], cfg.resolution};
  const DivergenceTheoremReport r = divergence_theorem_check(st, c.current, cyl);
  Suite s;
  s.pass = r.cap_difference <= cap_tol && r.stokes_residual <= cap_tol && std::abs(r.tube_flux) <= tube_tol;
  s.detail = {{"cap0", r.cap0.value},
              {"cap1", r.cap1.value},
              {"cap_difference", r.cap_difference},
              {"tube_flux", r.tube_flux},
              {"stokes_residual", r.stokes_residual},
              {"error_budget", r.error_budget},
              {"cap_tolerance", cap_tol},
              {"tube_tolerance", tube_tol}};
  return s;
}

int cmd_verify(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load(g);
  const Spacetime st = build_spacetime(cfg.spacetime);
  const CurrentSpec c = build_current(st, cfg.current, cfg.seed);
  const ParametrizedHypersurface h = build_surface(st, cfg.surface, cfg.resolution);
  const fs::path dir(g.out_dir);

  const auto suites = cfg.verify.value("suites", std::vector<std::string>{});
  json results = json::object();
  bool all = true;
  for (const std::string& name : suites) {
    Suite s;
    if (name == "normalization") {
      s = suite_normalization(st, c, h, cfg.verify);
    } else if (name == "spacelike_identity") {
      s = suite_identity(st, c, h, cfg.verify);
    } else if (name == "conservation_sweep") {
      s = suite_sweep(st, c, h, cfg, dir);
    } else if (name == "reynolds") {
      s = suite_reynolds(st, cfg, h, dir);
    } else if (name == "divergence_theorem") {
      s = suite_divergence(st, c, h, cfg);
    } else {
      throw Error(ErrorKind::ConfigError, "unknown verification suite '" + name + "'");
    }
    s.detail["pass"] = s.pass;
    results[name] = s.detail;
    all = all && s.pass;
  }
  const json summary{{"command", "verify"}, {"config", cfg.raw}, {"suites", results}, {"pass", all}};
  write_json(dir / "verify.json", summary);
  out << summary.dump(2) << '\n';
  return all ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- born

json region_json(const RegionSpec& r) {
  json rects = json::array();
  for (const ParamBox& b : r.rects) {
    json box = json::array();
    for (int i = 0; i < b.dim(); ++i) box.push_back({b.lo[i], b.hi[i]});
    rects.push_back(box);
  }
  return rects;
}

int cmd_born(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load(g);
  const Spacetime st = build_spacetime(cfg.spacetime);
  const CurrentSpec c = build_current(st, cfg.current, cfg.seed);
  const ParametrizedHypersurface h = build_surface(st, cfg.surface, cfg.resolution);
  const RegionSpec region = build_region(cfg, h);

  const IntegralResult p = born_probability(st, c.current, h, region);
  const PositivityReport pos = positivity_check(st, c.current, h);
  bool spacelike = true;
  for (std::size_t i = 0; i < pos.grid.size() && spacelike; ++i) {
    spacelike = surface_causal_class(st, h, pos.grid.node(i)) == CausalCharacter::Spacelike;
  }
  json flags = json::array();
  if (h.truncated) flags.push_back("truncated");
  if (!pos.tangent_nodes.empty()) flags.push_back("tangency");
  if (!pos.negative_nodes.empty()) flags.push_back("negative_integrand");
  if (!spacelike) flags.push_back("non_spacelike");

  const json record{{"command", "born"},
                    {"config", cfg.raw},
                    {"surface", h.name},
                    {"region", region_json(region)},
                    {"value", p.value},
                    {"error_estimate", p.error_estimate},
                    {"truncation_estimate", p.truncation_estimate},
                    {"flags", flags}};
  write_json(fs::path(g.out_dir) / "born.json", record);
  out << record.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load(g);
  const Spacetime st = build_spacetime(cfg.spacetime);
  const CurrentSpec c = build_current(st, cfg.current, cfg.seed);
  const ParametrizedHypersurface h = build_surface(st, cfg.surface, cfg.resolution);
  const ConservationReport r = conservation_sweep(st, c, h, cfg.flow.tau_grid(), flow_options(cfg.flow));

  CsvWriter csv(fs::path(g.out_dir) / "conservation.csv", {"tau", "total", "error_estimate", "residual"},
                meta("sweep", cfg.raw));
  for (std::size_t k = 0; k < r.tau.size(); ++k) {
    csv.write_row({num(r.tau[k]), num(r.totals[k]), num(r.error_estimates[k]), num(r.residuals[k])});
  }
  out << json{{"command", "sweep"},
              {"rows", csv.rows()},
              {"max_drift", r.max_drift},
              {"max_error_estimate", r.max_error_estimate},
              {"files", {"conservation.csv"}}}
             .dump(2)
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load(g);
  const Spacetime st = build_spacetime(cfg.spacetime);
  const CurrentSpec c = build_current(st, cfg.current, cfg.seed);
  const ParametrizedHypersurface h = build_surface(st, cfg.surface, cfg.resolution);
  const FlowMap fm = build_flow(cfg.flow, c);

  std::vector<std::string> columns{"tau", "node"};
  for (int i = 0; i < h.box.dim(); ++i) columns.push_back("u" + std::to_string(i + 1));
  for (const auto& name : point_columns(st.dim)) columns.push_back(name);
  columns.push_back("causal_class");
  CsvWriter csv(fs::path(g.out_dir) / "classify.csv", columns, meta("classify", cfg.raw));

  std::map<double, std::map<std::string, int>> counts;
  for (const SweepRow& row : causal_sweep(st, fm, h, cfg.flow.tau_grid())) {
    std::vector<std::string> cells{num(row.tau), std::to_string(row.node)};
    for (Eigen::Index i = 0; i < row.param.size(); ++i) cells.push_back(num(row.param[i]));
    for (Eigen::Index i = 0; i < row.point.size(); ++i) cells.push_back(num(row.point[i]));
    const std::string character(to_string(row.character));
    cells.push_back(character);
    csv.write_row(cells);
    ++counts[row.tau][character];
  }
  json per_tau = json::array();
  for (const auto& [tau, by_class] : counts) per_tau.push_back({{"tau", tau}, {"counts", by_class}});
  out << json{{"command", "classify"}, {"rows", csv.rows()}, {"summary", per_tau}, {"files", {"classify.csv"}}}.dump(2)
      << '\n';
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::SuperluminalVelocity:
    case ErrorKind::NonPositiveRescaling:
      return kConfigFailure;
    default:
      return kNumericalFailure;
  }
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Born-rule probabilities on evolving hypersurfaces", "curvedborn"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  int resolution = 0;
  app.add_option("--config", g.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out-dir", g.out_dir, "Directory for CSV/JSON outputs");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configuration's random seed");
  auto* res_opt = app.add_option("--resolution", resolution, "Override the quadrature resolution");

  Example1Options ex;
  auto* example1 = app.add_subcommand("example1", "Rotating-observer crossing table and frame data");
  example1->fallthrough();
  example1->add_option("--omega", ex.omega, "Angular velocity")->capture_default_str();
  example1->add_option("--r-max", ex.r_max, "Disk radius")->capture_default_str();
  example1->add_option("--grid", ex.grid, "Radial rows in the crossing table and disk grid size")->capture_default_str();
  example1->add_option("--tau-max", ex.tau_max, "Largest flow time")->capture_default_str();
  example1->add_option("--frames", ex.frames, "Number of frame times in [0, tau-max]")->capture_default_str();
  example1->add_option("--integrator", ex.integrator, "analytic or rk4")->capture_default_str();
  example1->add_option("--step", ex.step, "RK4 step (default scales with tau-max)");

  auto* verify = app.add_subcommand("verify", "Run the configured verification suites");
  auto* born = app.add_subcommand("born", "Born probability of the configured region");
  auto* sweep = app.add_subcommand("sweep", "Conservation sweep along the configured flow");
  auto* classify = app.add_subcommand("classify", "Causal character of surface nodes along the flow");
  for (auto* sub : {verify, born, sweep, classify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "ConfigError", e.what());
    return kConfigFailure;
  }
  if (*seed_opt) g.seed = seed;
  if (*res_opt) g.resolution = resolution;

  try {
    if (*example1) return cmd_example1(ex, g, out);
    if (*verify) return cmd_verify(g, out);
    if (*born) return cmd_born(g, out);
    if (*sweep) return cmd_sweep(g, out);
    return cmd_classify(g, out);
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    report_error(err, "ConfigError", e.what());
    return kConfigFailure;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "ConfigError", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    report_error(err, "NumericalFailure", e.what());
    return kNumericalFailure;
  }
}

}  // namespace curvedborn::cli
