#include "daa/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace daa {

namespace {

using json = nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + ctx);
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

void maybe_range(const json& j, const char* key, FeatureRanges::Range& out) {
  if (const auto it = j.find(key); it != j.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw ConfigError(std::string("'") + key + "' must be [lo, hi]");
    }
    out.lo = (*it)[0].get<double>();
    out.hi = (*it)[1].get<double>();
  }
}

std::vector<double> parse_grid(const json& j, const char* key) {
  if (j.is_array()) {
    std::vector<double> g = j.get<std::vector<double>>();
    return g;
  }
  if (j.is_object()) {
    check_keys(j, {"min", "max", "points"}, std::string("grid '") + key + "'");
    const double lo = j.at("min").get<double>();
    const double hi = j.at("max").get<double>();
    const int n = j.at("points").get<int>();
    if (n < 1) throw ConfigError(std::string("grid '") + key + "': points must be >= 1");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
      g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    return g;
  }
  throw ConfigError(std::string("grid '") + key +
                    "' must be an array or {min, max, points}");
}

void apply_camera(ToolConfig& cfg, const json& j) {
  check_keys(j, {"hfovDeg", "imageWidth", "imageHeight"}, "camera");
  maybe(j, "hfovDeg", cfg.camera.hfov_deg);
  maybe(j, "imageWidth", cfg.camera.image_width);
  maybe(j, "imageHeight", cfg.camera.image_height);
  if (!(cfg.camera.hfov_deg > 0.0) || cfg.camera.hfov_deg >= 180.0) {
    throw ConfigError("camera.hfovDeg must lie in (0, 180)");
  }
  if (cfg.camera.image_width <= 0 || cfg.camera.image_height <= 0) {
    throw ConfigError("camera dimensions must be positive");
  }
}

void apply_aircraft(ToolConfig& cfg, const json& j) {
  for (const auto& [key, value] : j.items()) {
    const auto name = parse_aircraft_class(key);
    if (!name) throw ConfigError("unknown aircraft class '" + key + "'");
    check_keys(value, {"wingspan", "length", "height"}, "aircraft." + key);
    AircraftClass& cls = cfg.classes[static_cast<int>(*name)];
    maybe(value, "wingspan", cls.wingspan);
    maybe(value, "length", cls.length);
    maybe(value, "height", cls.height);
    if (!(cls.wingspan > 0.0) || !(cls.length > 0.0) || !(cls.height > 0.0)) {
      throw ConfigError("aircraft extents must be positive for " + key);
    }
  }
}

void apply_encounter(ToolConfig& cfg, const json& j) {
  check_keys(j,
             {"duration", "cpaTime", "dt", "intruderVerticalRate", "features",
              "placement"},
             "encounter");
  maybe(j, "duration", cfg.encounter.duration_s);
  maybe(j, "cpaTime", cfg.encounter.cpa_time_s);
  maybe(j, "dt", cfg.encounter.dt_s);
  maybe(j, "intruderVerticalRate", cfg.encounter.intruder_vertical_rate);
  if (const auto it = j.find("features"); it != j.end()) {
    check_keys(*it, {"ownshipSpeed", "intruderSpeed", "hmd", "vmd", "relativeHeading"},
               "encounter.features");
    maybe_range(*it, "ownshipSpeed", cfg.encounter.features.ownship_speed);
    maybe_range(*it, "intruderSpeed", cfg.encounter.features.intruder_speed);
    maybe_range(*it, "hmd", cfg.encounter.features.hmd);
    maybe_range(*it, "vmd", cfg.encounter.features.vmd);
    maybe_range(*it, "relativeHeading", cfg.encounter.features.relative_heading);
  }
  if (const auto it = j.find("placement"); it != j.end()) {
    check_keys(*it, {"maxEastNorth", "maxAltitude", "rotate"}, "encounter.placement");
    maybe(*it, "maxEastNorth", cfg.encounter.placement.max_east_north);
    maybe(*it, "maxAltitude", cfg.encounter.placement.max_altitude);
    maybe(*it, "rotate", cfg.encounter.placement.rotate);
  }
}

void apply_scene(ToolConfig& cfg, const json& j) {
  check_keys(j,
             {"gammaScale", "gammaShapeSmall", "gammaShapeBoeing", "minRangeSmall",
              "minRangeBoeing", "pitchSigma", "pitchClip", "rollSigma", "rollClip",
              "maxEastNorth", "maxAltitude", "timeLo", "timeHi"},
             "scene");
  maybe(j, "gammaScale", cfg.scene.gamma_scale);
  maybe(j, "gammaShapeSmall", cfg.scene.gamma_shape_small);
  maybe(j, "gammaShapeBoeing", cfg.scene.gamma_shape_boeing);
  maybe(j, "minRangeSmall", cfg.scene.min_range_small);
  maybe(j, "minRangeBoeing", cfg.scene.min_range_boeing);
  maybe(j, "pitchSigma", cfg.scene.pitch_sigma);
  maybe(j, "pitchClip", cfg.scene.pitch_clip);
  maybe(j, "rollSigma", cfg.scene.roll_sigma);
  maybe(j, "rollClip", cfg.scene.roll_clip);
  maybe(j, "maxEastNorth", cfg.scene.max_east_north);
  maybe(j, "maxAltitude", cfg.scene.max_altitude);
  maybe(j, "timeLo", cfg.scene.time_lo);
  maybe(j, "timeHi", cfg.scene.time_hi);
  if (cfg.scene.gamma_shape_small < 1 || cfg.scene.gamma_shape_boeing < 1) {
    throw ConfigError("gamma shapes must be positive integers");
  }
  if (!(cfg.scene.gamma_scale > 0.0)) throw ConfigError("gammaScale must be positive");
}

void apply_mdp(ToolConfig& cfg, const json& j) {
  check_keys(j,
             {"hGrid", "dhOwnGrid", "dhIntGrid", "tauGrid", "discount", "rewards",
              "compliance", "dt", "nmacAltitude", "actions"},
             "mdp");
  if (const auto it = j.find("hGrid"); it != j.end()) {
    cfg.mdp.h_grid = parse_grid(*it, "hGrid");
  }
  if (const auto it = j.find("dhOwnGrid"); it != j.end()) {
    cfg.mdp.dh_own_grid = parse_grid(*it, "dhOwnGrid");
  }
  if (const auto it = j.find("dhIntGrid"); it != j.end()) {
    cfg.mdp.dh_int_grid = parse_grid(*it, "dhIntGrid");
  }
  if (const auto it = j.find("tauGrid"); it != j.end()) {
    cfg.mdp.tau_grid = parse_grid(*it, "tauGrid");
  }
  maybe(j, "discount", cfg.mdp.discount);
  maybe(j, "dt", cfg.mdp.dt);
  maybe(j, "nmacAltitude", cfg.mdp.nmac_altitude);
  if (const auto it = j.find("rewards"); it != j.end()) {
    check_keys(*it, {"nmacPenalty", "alertCost", "reversalCost", "strengthenCost"},
               "mdp.rewards");
    maybe(*it, "nmacPenalty", cfg.mdp.rewards.nmac_penalty);
    maybe(*it, "alertCost", cfg.mdp.rewards.alert_cost);
    maybe(*it, "reversalCost", cfg.mdp.rewards.reversal_cost);
    maybe(*it, "strengthenCost", cfg.mdp.rewards.strengthen_cost);
  }
  if (const auto it = j.find("compliance"); it != j.end()) {
    check_keys(*it, {"ownAccel", "intruderAccel", "intruderAccelProb"},
               "mdp.compliance");
    maybe(*it, "ownAccel", cfg.mdp.compliance.own_accel);
    maybe(*it, "intruderAccel", cfg.mdp.compliance.intruder_accel);
    maybe(*it, "intruderAccelProb", cfg.mdp.compliance.intruder_accel_prob);
  }
  if (const auto it = j.find("actions"); it != j.end()) {
    cfg.mdp.actions.clear();
    for (const auto& a : *it) {
      const auto adv = parse_advisory(a.get<std::string>());
      if (!adv) throw ConfigError("unknown advisory " + a.dump() + " in mdp.actions");
      cfg.mdp.actions.push_back(*adv);
    }
  }
  try {
    validate_mdp(cfg.mdp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid mdp config: ") + e.what());
  }
}

void apply_solver(ToolConfig& cfg, const json& j) {
  check_keys(j, {"tolerance", "maxIterations", "workers", "simd"}, "solver");
  maybe(j, "tolerance", cfg.solve.tolerance);
  maybe(j, "maxIterations", cfg.solve.max_iterations);
  maybe(j, "workers", cfg.solve.workers);
  if (const auto it = j.find("simd"); it != j.end()) {
    const auto simd = kernels::parse_simd(it->get<std::string>());
    if (!simd) throw ConfigError("solver.simd must be auto|scalar|avx2");
    cfg.solve.simd = *simd;
  }
  if (!(cfg.solve.tolerance > 0.0)) throw ConfigError("solver.tolerance must be > 0");
  if (cfg.solve.max_iterations < 1) {
    throw ConfigError("solver.maxIterations must be >= 1");
  }
}

void apply_sim(ToolConfig& cfg, const json& j) {
  check_keys(j,
             {"dt", "accelLimit", "tauMax", "interpolatedNmac", "recordSteps",
              "failFast"},
             "sim");
  maybe(j, "dt", cfg.sim.dt);
  maybe(j, "accelLimit", cfg.sim.vertical_accel_limit);
  maybe(j, "tauMax", cfg.sim.tau_max);
  maybe(j, "interpolatedNmac", cfg.sim.interpolated_nmac);
  maybe(j, "recordSteps", cfg.sim.record_steps);
  maybe(j, "failFast", cfg.sim.fail_fast);
  if (!(cfg.sim.dt > 0.0)) throw ConfigError("sim.dt must be positive");
  if (!(cfg.sim.vertical_accel_limit > 0.0)) {
    throw ConfigError("sim.accelLimit must be positive");
  }
}

void apply_perception(ToolConfig& cfg, const json& j) {
  check_keys(j,
             {"backend", "scale", "recallByRange", "weatherMultipliers",
              "referenceWeatherMultipliers", "noise", "endpoint"},
             "perception");
  maybe(j, "backend", cfg.perception.backend);
  maybe(j, "scale", cfg.perception.profile.probability_scale);
  if (const auto it = j.find("recallByRange"); it != j.end()) {
    cfg.perception.profile.recall_by_range.clear();
    for (const auto& row : *it) {
      if (!row.is_array() || row.size() != 2) {
        throw ConfigError("recallByRange rows must be [upperRange|null, recall]");
      }
      DetectorProfile::RangeRecall r;
      r.range_upper_m = row[0].is_null() ? std::numeric_limits<double>::infinity()
                                         : row[0].get<double>();
      r.probability = row[1].get<double>();
      if (r.probability < 0.0 || r.probability > 1.0) {
        throw ConfigError("recall probabilities must lie in [0,1]");
      }
      cfg.perception.profile.recall_by_range.push_back(r);
    }
    for (std::size_t i = 1; i < cfg.perception.profile.recall_by_range.size(); ++i) {
      if (!(cfg.perception.profile.recall_by_range[i].range_upper_m >
            cfg.perception.profile.recall_by_range[i - 1].range_upper_m)) {
        throw ConfigError("recallByRange bounds must be strictly increasing");
      }
    }
  }
  if (const auto it = j.find("weatherMultipliers"); it != j.end()) {
    for (const auto& [key, value] : it->items()) {
      const auto w = parse_weather(key);
      if (!w) throw ConfigError("unknown weather '" + key + "' in weatherMultipliers");
      cfg.perception.profile.weather_multipliers[*w] = value.get<double>();
    }
  }
  maybe(j, "referenceWeatherMultipliers", cfg.perception.reference_weather_multipliers);
  if (const auto it = j.find("noise"); it != j.end()) {
    check_keys(*it, {"enabled", "bearingSigmaDeg", "elevationSigmaDeg",
                     "rangeSigmaFrac"},
               "perception.noise");
    maybe(*it, "enabled", cfg.perception.noise.enabled);
    maybe(*it, "bearingSigmaDeg", cfg.perception.noise.bearing_sigma_deg);
    maybe(*it, "elevationSigmaDeg", cfg.perception.noise.elevation_sigma_deg);
    maybe(*it, "rangeSigmaFrac", cfg.perception.noise.range_sigma_frac);
  }
  if (const auto it = j.find("endpoint"); it != j.end()) {
    check_keys(*it, {"spec", "timeoutMs", "hardFail"}, "perception.endpoint");
    maybe(*it, "spec", cfg.perception.endpoint.spec);
    maybe(*it, "timeoutMs", cfg.perception.endpoint.timeout_ms);
    maybe(*it, "hardFail", cfg.perception.endpoint.hard_fail);
  }
}

}  // namespace

void apply_config_json(ToolConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(j,
             {"camera", "aircraft", "encounter", "scene", "mdp", "solver", "sim",
              "perception"},
             "config root");
  if (const auto it = j.find("camera"); it != j.end()) apply_camera(cfg, *it);
  if (const auto it = j.find("aircraft"); it != j.end()) apply_aircraft(cfg, *it);
  if (const auto it = j.find("encounter"); it != j.end()) apply_encounter(cfg, *it);
  if (const auto it = j.find("scene"); it != j.end()) apply_scene(cfg, *it);
  if (const auto it = j.find("mdp"); it != j.end()) apply_mdp(cfg, *it);
  if (const auto it = j.find("solver"); it != j.end()) apply_solver(cfg, *it);
  if (const auto it = j.find("sim"); it != j.end()) apply_sim(cfg, *it);
  if (const auto it = j.find("perception"); it != j.end()) apply_perception(cfg, *it);
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid config JSON in " + path.string() + ": " + e.what());
  }
  ToolConfig cfg;
  apply_config_json(cfg, j);
  return cfg;
}

nlohmann::json config_to_json(const ToolConfig& cfg) {
  json aircraft = json::object();
  for (int i = 0; i < kNumAircraftClasses; ++i) {
    const AircraftClass& cls = cfg.classes[i];
    aircraft[aircraft_class_name(static_cast<AircraftClassName>(i))] = {
        {"wingspan", cls.wingspan}, {"length", cls.length}, {"height", cls.height}};
  }
  json recall = json::array();
  for (const auto& r : cfg.perception.profile.recall_by_range) {
    recall.push_back({std::isinf(r.range_upper_m) ? json() : json(r.range_upper_m),
                      r.probability});
  }
  json weather_mult = json::object();
  for (const auto& [w, v] : cfg.perception.profile.weather_multipliers) {
    weather_mult[weather_name(w)] = v;
  }
  json actions = json::array();
  for (Advisory a : cfg.mdp.actions) actions.push_back(advisory_name(a));

  return {
      {"camera",
       {{"hfovDeg", cfg.camera.hfov_deg},
        {"imageWidth", cfg.camera.image_width},
        {"imageHeight", cfg.camera.image_height}}},
      {"aircraft", aircraft},
      {"encounter",
       {{"duration", cfg.encounter.duration_s},
        {"cpaTime", cfg.encounter.cpa_time_s},
        {"dt", cfg.encounter.dt_s},
        {"intruderVerticalRate", cfg.encounter.intruder_vertical_rate},
        {"features",
         {{"ownshipSpeed",
           {cfg.encounter.features.ownship_speed.lo,
            cfg.encounter.features.ownship_speed.hi}},
          {"intruderSpeed",
           {cfg.encounter.features.intruder_speed.lo,
            cfg.encounter.features.intruder_speed.hi}},
          {"hmd", {cfg.encounter.features.hmd.lo, cfg.encounter.features.hmd.hi}},
          {"vmd", {cfg.encounter.features.vmd.lo, cfg.encounter.features.vmd.hi}},
          {"relativeHeading",
           {cfg.encounter.features.relative_heading.lo,
            cfg.encounter.features.relative_heading.hi}}}},
        {"placement",
         {{"maxEastNorth", cfg.encounter.placement.max_east_north},
          {"maxAltitude", cfg.encounter.placement.max_altitude},
          {"rotate", cfg.encounter.placement.rotate}}}}},
      {"scene",
       {{"gammaScale", cfg.scene.gamma_scale},
        {"gammaShapeSmall", cfg.scene.gamma_shape_small},
        {"gammaShapeBoeing", cfg.scene.gamma_shape_boeing},
        {"minRangeSmall", cfg.scene.min_range_small},
        {"minRangeBoeing", cfg.scene.min_range_boeing},
        {"pitchSigma", cfg.scene.pitch_sigma},
        {"pitchClip", cfg.scene.pitch_clip},
        {"rollSigma", cfg.scene.roll_sigma},
        {"rollClip", cfg.scene.roll_clip},
        {"maxEastNorth", cfg.scene.max_east_north},
        {"maxAltitude", cfg.scene.max_altitude},
        {"timeLo", cfg.scene.time_lo},
        {"timeHi", cfg.scene.time_hi}}},
      {"mdp",
       {{"hGrid", cfg.mdp.h_grid},
        {"dhOwnGrid", cfg.mdp.dh_own_grid},
        {"dhIntGrid", cfg.mdp.dh_int_grid},
        {"tauGrid", cfg.mdp.tau_grid},
        {"actions", actions},
        {"discount", cfg.mdp.discount},
        {"dt", cfg.mdp.dt},
        {"nmacAltitude", cfg.mdp.nmac_altitude},
        {"rewards",
         {{"nmacPenalty", cfg.mdp.rewards.nmac_penalty},
          {"alertCost", cfg.mdp.rewards.alert_cost},
          {"reversalCost", cfg.mdp.rewards.reversal_cost},
          {"strengthenCost", cfg.mdp.rewards.strengthen_cost}}},
        {"compliance",
         {{"ownAccel", cfg.mdp.compliance.own_accel},
          {"intruderAccel", cfg.mdp.compliance.intruder_accel},
          {"intruderAccelProb", cfg.mdp.compliance.intruder_accel_prob}}}}},
      {"solver",
       {{"tolerance", cfg.solve.tolerance},
        {"maxIterations", cfg.solve.max_iterations},
        {"workers", cfg.solve.workers},
        {"simd", kernels::simd_name(cfg.solve.simd)}}},
      {"sim",
       {{"dt", cfg.sim.dt},
        {"accelLimit", cfg.sim.vertical_accel_limit},
        {"tauMax", cfg.sim.tau_max},
        {"interpolatedNmac", cfg.sim.interpolated_nmac},
        {"recordSteps", cfg.sim.record_steps},
        {"failFast", cfg.sim.fail_fast}}},
      {"perception",
       {{"backend", cfg.perception.backend},
        {"scale", cfg.perception.profile.probability_scale},
        {"recallByRange", recall},
        {"weatherMultipliers", weather_mult},
        {"referenceWeatherMultipliers", cfg.perception.reference_weather_multipliers},
        {"noise",
         {{"enabled", cfg.perception.noise.enabled},
          {"bearingSigmaDeg", cfg.perception.noise.bearing_sigma_deg},
          {"elevationSigmaDeg", cfg.perception.noise.elevation_sigma_deg},
          {"rangeSigmaFrac", cfg.perception.noise.range_sigma_frac}}},
        {"endpoint",
         {{"spec", cfg.perception.endpoint.spec},
          {"timeoutMs", cfg.perception.endpoint.timeout_ms},
          {"hardFail", cfg.perception.endpoint.hard_fail}}}}}};
}

std::unique_ptr<Perception> make_perception(const ToolConfig& cfg,
                                            const std::string& backend_override,
                                            double scale_override) {
  const std::string backend =
      backend_override.empty() ? cfg.perception.backend : backend_override;
  if (backend == "blind") return make_blind_perception();
  if (backend == "perfect") return make_perfect_perception(cfg.camera, cfg.classes);
  if (backend == "boxgeom") {
    return make_box_geometry_perception(cfg.camera, cfg.classes);
  }
  if (backend == "stochastic") {
    DetectorProfile profile = cfg.perception.profile;
    if (cfg.perception.reference_weather_multipliers) {
      profile.weather_multipliers = reference_weather_multipliers();
    }
    profile.probability_scale *= scale_override;
    return make_stochastic_perception(cfg.camera, cfg.classes, std::move(profile),
                                      cfg.perception.noise);
  }
  if (backend == "external") {
    DetectorEndpoint ep = cfg.perception.endpoint;
    if (ep.spec.empty()) {
      if (const char* env = std::getenv("DAASIM_DETECTOR")) ep.spec = env;
    }
    if (ep.spec.empty()) {
      throw ConfigError(
          "external perception needs perception.endpoint.spec or DAASIM_DETECTOR");
    }
    return make_external_perception(cfg.camera, cfg.classes, std::move(ep));
  }
  throw ConfigError("unknown perception backend '" + backend +
                    "' (expected blind|perfect|stochastic|boxgeom|external)");
}

}  // namespace daa
