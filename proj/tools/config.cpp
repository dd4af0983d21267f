#include "config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace curvedborn::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::vector<std::string> coordinate_names(int dim) {
  return dim == 3 ? std::vector<std::string>{"t", "x", "y"} : std::vector<std::string>{"t", "x", "y", "z"};
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& obj, const char* key) {
  if (!obj.contains(key)) config_error(std::string("missing field '") + key + "'");
  return get<T>(obj, key, T{});
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Integrator parse_integrator(const std::string& name) {
  if (name == "analytic") return Integrator::AnalyticIfAvailable;
  if (name == "rk4") return Integrator::RK4;
  config_error("unknown integrator '" + name + "' (expected analytic or rk4)");
}

ScalarFn coordinate_expression(const std::string& src, int dim) {
  return [e = Expression::parse(src, coordinate_names(dim))](const Vec& p) { return e(p); };
}

void require_minkowski3(const Spacetime& st, const std::string& what) {
  if (st.dim != 3 || st.name != "minkowski3") config_error(what + " is defined on Minkowski 3-space only");
}

}  // namespace

std::vector<double> FlowConfig::tau_grid() const {
  if (samples < 1) config_error("flow.samples must be >= 1");
  if (samples == 1) return {tau_min};
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) grid[static_cast<std::size_t>(k)] = tau_min + (tau_max - tau_min) * k / (samples - 1);
  return grid;
}

json default_config() {
  return json::parse(R"({
    "spacetime": {"name": "minkowski", "dim": 3},
    "current": {"name": "boosted_gaussian", "velocity": [0.5, 0.0], "width": 1.0},
    "surface": {"name": "time_slice", "t0": 0.0, "half_width": 8.0},
    "resolution": 24,
    "flow": {"field": "current", "integrator": "analytic", "tau_min": 0.0, "tau_max": 5.0, "samples": 11},
    "seed": 12345,
    "verify": {
      "suites": ["normalization", "spacelike_identity", "conservation_sweep", "reynolds", "divergence_theorem"],
      "normalization_tolerance": 1e-6,
      "identity_tolerance": 1e-8,
      "pointwise_tolerance": 1e-10,
      "drift_tolerance": 1e-6,
      "reynolds_tolerance": 1e-4,
      "reynolds_spacing": 0.01,
      "reynolds_tau_max": 0.2,
      "cap_tolerance": 1e-6,
      "tube_tolerance": 1e-10,
      "reynolds_current": {"name": "decaying_rotating", "omega": 1.0, "center_x": 0.5, "width": 0.5, "decay": 0.5},
      "cylinder_tau": [0.0, 1.0]
    }
  })");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("configuration must be a JSON object");
  json merged = default_config();
  merged.merge_patch(doc);

  ExperimentConfig cfg;
  cfg.raw = merged;
  cfg.spacetime = merged.at("spacetime");
  cfg.current = merged.at("current");
  cfg.surface = merged.at("surface");
  cfg.verify = merged.at("verify");
  cfg.resolution = get<int>(merged, "resolution", 24);
  cfg.seed = get<std::uint64_t>(merged, "seed", 12345);
  if (cfg.resolution < 2) config_error("resolution must be >= 2");

  const json& f = merged.at("flow");
  cfg.flow.field = get<std::string>(f, "field", "current");
  cfg.flow.omega = get<double>(f, "omega", 1.0);
  cfg.flow.integrator = parse_integrator(get<std::string>(f, "integrator", "analytic"));
  cfg.flow.step = get<double>(f, "step", 0.0);
  cfg.flow.tau_min = get<double>(f, "tau_min", 0.0);
  cfg.flow.tau_max = get<double>(f, "tau_max", 5.0);
  cfg.flow.samples = get<int>(f, "samples", 11);
  if (cfg.flow.field != "current" && cfg.flow.field != "example1") {
    config_error("flow.field must be 'current' or 'example1'");
  }

  if (merged.contains("region")) {
    const json& r = merged.at("region");
    if (!r.is_array()) config_error("region must be a list of rectangles");
    std::vector<ParamBox> rects;
    for (const json& rect : r) rects.push_back(parse_box(rect));
    cfg.region = std::move(rects);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

ParamBox parse_box(const json& intervals) {
  if (!intervals.is_array() || intervals.empty()) config_error("box must be a non-empty list of [lo, hi] intervals");
  ParamBox box;
  box.lo.resize(static_cast<Eigen::Index>(intervals.size()));
  box.hi.resize(static_cast<Eigen::Index>(intervals.size()));
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const json& iv = intervals[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      config_error("box interval " + std::to_string(i) + " must be [lo, hi]");
    }
    box.lo[static_cast<Eigen::Index>(i)] = iv[0].get<double>();
    box.hi[static_cast<Eigen::Index>(i)] = iv[1].get<double>();
  }
  try {
    validate(box);
  } catch (const Error& e) {
    config_error(e.what());
  }
  return box;
}

Spacetime build_spacetime(const json& spec) {
  const auto name = require<std::string>(spec, "name");
  const int dim = get<int>(spec, "dim", 3);
  if (dim != 3 && dim != 4) config_error("spacetime.dim must be 3 or 4");
  if (name == "minkowski") return minkowski(dim);
  if (name == "conformal") return conformally_flat(dim, get<double>(spec, "amplitude", 0.1));
  config_error("unknown spacetime '" + name + "'");
}

CurrentSpec build_current(const Spacetime& st, const json& spec, std::uint64_t seed) {
  const auto name = require<std::string>(spec, "name");
  CurrentSpec c;
  if (name == "static_gaussian") {
    c = static_gaussian_current(st, get<double>(spec, "width", 1.0));
  } else if (name == "boosted_gaussian") {
    const auto v = get<std::vector<double>>(spec, "velocity", std::vector<double>(static_cast<std::size_t>(st.dim - 1)));
    if (static_cast<int>(v.size()) != st.dim - 1) config_error("current.velocity needs dim - 1 components");
    c = boosted_gaussian_current(st, to_vec(v), get<double>(spec, "width", 1.0));
  } else if (name == "uniform") {
    c = uniform_current(st, get<double>(spec, "density", 1.0));
  } else if (name == "swirling_gaussian") {
    require_minkowski3(st, name);
    c = swirling_gaussian_current(get<double>(spec, "omega", 1.0), get<double>(spec, "width", 1.0));
  } else if (name == "decaying_rotating") {
    require_minkowski3(st, name);
    c = decaying_rotating_current(get<double>(spec, "omega", 1.0), get<double>(spec, "center_x", 0.5),
                                  get<double>(spec, "width", 0.5), get<double>(spec, "decay", 0.5));
  } else if (name == "expression") {
    const auto sources = require<std::vector<std::string>>(spec, "components");
    if (static_cast<int>(sources.size()) != st.dim) config_error("current.components needs one expression per coordinate");
    std::vector<Expression> comps;
    for (const auto& s : sources) comps.push_back(Expression::parse(s, coordinate_names(st.dim)));
    c.name = "expression";
    c.current.value = [comps](const Vec& p) {
      Vec j(static_cast<Eigen::Index>(comps.size()));
      for (std::size_t i = 0; i < comps.size(); ++i) j[static_cast<Eigen::Index>(i)] = comps[i](p);
      return j;
    };
    // X = J / J^0, rho = J^0.
    c.velocity.value = [j = c.current](const Vec& p) {
      const Vec v = j(p);
      return Vec(v / v[0]);
    };
    c.density = [j = c.current](const Vec& p) { return j(p)[0]; };
    c.divergence_free = get<bool>(spec, "divergence_free", false);
    c.sample_box.lo = Vec::Constant(st.dim, -1.0);
    c.sample_box.hi = Vec::Constant(st.dim, 1.0);
  } else {
    config_error("unknown current '" + name + "'");
  }
  if (spec.contains("rescale")) {
    c = rescale_velocity(c, coordinate_expression(require<std::string>(spec, "rescale"), st.dim), seed);
  }
  return c;
}

ParametrizedHypersurface build_surface(const Spacetime& st, const json& spec, int resolution) {
  const auto name = require<std::string>(spec, "name");
  ParametrizedHypersurface h;
  if (name == "time_slice") {
    h = time_slice(st.dim, get<double>(spec, "t0", 0.0), get<double>(spec, "half_width", 8.0), resolution);
  } else if (name == "disk_polar" || name == "disk_cartesian" || name == "tilted_plane") {
    if (st.dim != 3) config_error(name + " surfaces live in 3-dimensional charts");
    if (name == "disk_polar") {
      h = disk_polar(get<double>(spec, "radius", 2.0), resolution, resolution, get<double>(spec, "t0", 0.0));
    } else if (name == "disk_cartesian") {
      h = disk_cartesian(get<double>(spec, "radius", 2.0), resolution, get<double>(spec, "t0", 0.0));
    } else {
      const ParamBox box = spec.contains("box") ? parse_box(spec.at("box")) : parse_box(json::parse("[[0,1],[0,1]]"));
      h = tilted_plane(get<double>(spec, "slope", 0.3), box, resolution);
    }
  } else if (name == "graph") {
    const ParamBox box = parse_box(require<json>(spec, "box"));
    if (box.dim() != st.dim - 1) config_error("graph box must have dim - 1 intervals");
    auto names = coordinate_names(st.dim);
    names.erase(names.begin());
    auto height = [e = Expression::parse(require<std::string>(spec, "height"), names)](const Vec& u) { return e(u); };
    h = graph_surface("graph", height, box, resolution, get<bool>(spec, "truncated", false));
  } else if (name == "expression") {
    const auto params = require<std::vector<std::string>>(spec, "params");
    const auto sources = require<std::vector<std::string>>(spec, "embed");
    if (static_cast<int>(params.size()) != st.dim - 1) config_error("surface.params needs dim - 1 names");
    if (static_cast<int>(sources.size()) != st.dim) config_error("surface.embed needs one expression per coordinate");
    std::vector<Expression> comps;
    for (const auto& s : sources) comps.push_back(Expression::parse(s, params));
    h.name = "expression";
    h.box = parse_box(require<json>(spec, "box"));
    if (h.box.dim() != st.dim - 1) config_error("surface.box needs dim - 1 intervals");
    h.grid.assign(params.size(), resolution);
    h.truncated = get<bool>(spec, "truncated", false);
    h.embed = [comps](const Vec& u) {
      Vec p(static_cast<Eigen::Index>(comps.size()));
      for (std::size_t i = 0; i < comps.size(); ++i) p[static_cast<Eigen::Index>(i)] = comps[i](u);
      return p;
    };
  } else {
    config_error("unknown surface '" + name + "'");
  }
  h.orientation = get<int>(spec, "orientation", 1);
  if (h.orientation != 1 && h.orientation != -1) config_error("surface.orientation must be 1 or -1");
  return h;
}

FlowMap build_flow(const FlowConfig& flow, const CurrentSpec& current) {
  FlowMap fm;
  fm.field = flow.field == "example1" ? example1_field(flow.omega) : current.velocity;
  fm.integrator = flow.integrator;
  fm.step = flow.step > 0.0 ? flow.step : default_rk4_step(std::max(std::abs(flow.tau_min), std::abs(flow.tau_max)));
  return fm;
}

RegionSpec build_region(const ExperimentConfig& cfg, const ParametrizedHypersurface& h) {
  if (!cfg.region) return RegionSpec::full(h);
  RegionSpec r{*cfg.region};
  try {
    validate(r, h.box);
  } catch (const Error& e) {
    config_error(e.what());
  }
  return r;
}

}  // namespace curvedborn::cli
