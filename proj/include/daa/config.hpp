#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "daa/cas.hpp"
#include "daa/encounters.hpp"
#include "daa/geometry.hpp"
#include "daa/perception.hpp"
#include "daa/simulator_types.hpp"

namespace daa {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything the tools consume, with the documented defaults. A config file
// overrides fields selectively; unknown keys are rejected.
struct ToolConfig {
  CameraModel camera;
  ClassTable classes = default_class_table();
  EncounterConfig encounter;
  SceneConfig scene;
  MdpSpec mdp = default_mdp_spec();
  SolveOptions solve;
  SimConfig sim;

  struct PerceptionConfig {
    std::string backend = "perfect";  // blind|perfect|stochastic|boxgeom|external
    DetectorProfile profile = default_detector_profile();
    bool reference_weather_multipliers = false;
    EstimateNoise noise;
    DetectorEndpoint endpoint;
  } perception;
};

// Defaults overlaid with the JSON document at `path`.
ToolConfig load_config(const std::filesystem::path& path);

// Apply one parsed document over the current values. Throws ConfigError on
// unknown keys or invalid values.
void apply_config_json(ToolConfig& cfg, const nlohmann::json& j);

// Full snapshot, suitable for run manifests; applying it reproduces cfg.
nlohmann::json config_to_json(const ToolConfig& cfg);

// Build the configured perception backend. backend_override, when non-empty,
// replaces cfg.perception.backend; scale_override multiplies the stochastic
// profile's probability scale.
std::unique_ptr<Perception> make_perception(const ToolConfig& cfg,
                                            const std::string& backend_override = "",
                                            double scale_override = 1.0);

}  // namespace daa
