#pragma once

#include "curvedborn/curvedborn.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curvedborn::cli {

using json = nlohmann::json;

struct FlowConfig {
  /// "current" flows along the current's velocity X; "example1" along the rotating observer field.
  std::string field = "current";
  double omega = 1.0;
  Integrator integrator = Integrator::AnalyticIfAvailable;
  double step = 0.0;
  double tau_min = 0.0;
  double tau_max = 5.0;
  int samples = 11;

  std::vector<double> tau_grid() const;
};

/// Parsed experiment description; `raw` keeps the document for echoing into outputs.
struct ExperimentConfig {
  json raw;
  json spacetime;
  json current;
  json surface;
  json verify;
  FlowConfig flow;
  std::optional<std::vector<ParamBox>> region;
  int resolution = 24;
  std::uint64_t seed = 12345;
};

/// Defaults merged with `doc`; throws ConfigError on malformed input.
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);
json default_config();

Spacetime build_spacetime(const json& spec);
CurrentSpec build_current(const Spacetime& st, const json& spec, std::uint64_t seed);
ParametrizedHypersurface build_surface(const Spacetime& st, const json& spec, int resolution);
FlowMap build_flow(const FlowConfig& flow, const CurrentSpec& current);
RegionSpec build_region(const ExperimentConfig& cfg, const ParametrizedHypersurface& h);

ParamBox parse_box(const json& intervals);

}  // namespace curvedborn::cli
