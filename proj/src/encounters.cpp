#include "daa/encounters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace daa {

const char* weather_name(Weather w) {
  switch (w) {
    case Weather::Clear: return "Clear";
    case Weather::HighCirrus: return "HighCirrus";
    case Weather::Scattered: return "Scattered";
    case Weather::Broken: return "Broken";
    case Weather::Overcast: return "Overcast";
    case Weather::Stratus: return "Stratus";
  }
  return "?";
}

const char* region_name(Region r) {
  switch (r) {
    case Region::PAO: return "PAO";
    case Region::BOS: return "BOS";
    case Region::OSH: return "OSH";
    case Region::RNO: return "RNO";
  }
  return "?";
}

const char* time_window_name(TimeWindow t) {
  switch (t) {
    case TimeWindow::Morning: return "Morning";
    case TimeWindow::Midday: return "Midday";
    case TimeWindow::Afternoon: return "Afternoon";
    case TimeWindow::LateAfternoon: return "LateAfternoon";
  }
  return "?";
}

std::optional<Weather> parse_weather(const std::string& s) {
  for (int i = 0; i < kNumWeather; ++i) {
    if (s == weather_name(static_cast<Weather>(i))) return static_cast<Weather>(i);
  }
  return std::nullopt;
}

std::optional<Region> parse_region(const std::string& s) {
  for (int i = 0; i < kNumRegions; ++i) {
    if (s == region_name(static_cast<Region>(i))) return static_cast<Region>(i);
  }
  return std::nullopt;
}

TimeWindow time_of_day_window(double t) {
  if (t < 10.0) return TimeWindow::Morning;
  if (t < 13.0) return TimeWindow::Midday;
  if (t < 15.0) return TimeWindow::Afternoon;
  return TimeWindow::LateAfternoon;
}

namespace {

double sample_range(Rng& rng, const FeatureRanges::Range& r, const char* name) {
  if (r.lo > r.hi) {
    throw std::invalid_argument(std::string("invalid feature range for ") + name);
  }
  return rng.uniform(r.lo, r.hi);
}

std::pair<double, double> window_bounds(TimeWindow w) {
  switch (w) {
    case TimeWindow::Morning: return {8.0, 10.0};
    case TimeWindow::Midday: return {10.0, 13.0};
    case TimeWindow::Afternoon: return {13.0, 15.0};
    case TimeWindow::LateAfternoon: return {15.0, 17.0};
  }
  return {8.0, 17.0};
}

}  // namespace

EncounterFeatures sample_features(Rng& rng, const FeatureRanges& ranges) {
  EncounterFeatures f;
  f.ownship_speed = sample_range(rng, ranges.ownship_speed, "ownship_speed");
  f.intruder_speed = sample_range(rng, ranges.intruder_speed, "intruder_speed");
  f.hmd = sample_range(rng, ranges.hmd, "hmd");
  f.vmd = sample_range(rng, ranges.vmd, "vmd");
  f.relative_heading = sample_range(rng, ranges.relative_heading, "relative_heading");
  return f;
}

Encounter build_trajectories(const EncounterFeatures& f, const EncounterConfig& cfg) {
  if (!(cfg.cpa_time_s > 0.0) || !(cfg.cpa_time_s < cfg.duration_s)) {
    throw std::invalid_argument("cpa_time must lie strictly inside (0, duration)");
  }
  if (!(cfg.dt_s > 0.0)) throw std::invalid_argument("dt must be positive");

  const double own_heading = 0.0;
  const double int_heading = wrap_heading_deg(own_heading + f.relative_heading);
  const double uo_e = std::sin(own_heading * kDegToRad);
  const double uo_n = std::cos(own_heading * kDegToRad);
  const double ui_e = std::sin(int_heading * kDegToRad);
  const double ui_n = std::cos(int_heading * kDegToRad);

  const double dv_e = f.intruder_speed * ui_e - f.ownship_speed * uo_e;
  const double dv_n = f.intruder_speed * ui_n - f.ownship_speed * uo_n;
  const double dv_norm = std::hypot(dv_e, dv_n);

  // Miss vector perpendicular to the relative velocity so the planar minimum
  // falls exactly at CPA. Degenerate zero relative velocity: point east.
  double w_e = 1.0, w_n = 0.0;
  if (dv_norm > 1e-12) {
    w_e = -dv_n / dv_norm;
    w_n = dv_e / dv_norm;
  }

  const double T = cfg.cpa_time_s;
  const double cpa_own_e = f.ownship_speed * uo_e * T;
  const double cpa_own_n = f.ownship_speed * uo_n * T;
  const double cpa_int_e = cpa_own_e + f.hmd * w_e;
  const double cpa_int_n = cpa_own_n + f.hmd * w_n;

  Encounter enc;
  enc.duration_s = cfg.duration_s;
  enc.cpa_time_s = cfg.cpa_time_s;
  enc.dt_s = cfg.dt_s;
  enc.features = f;

  const int n = static_cast<int>(std::llround(cfg.duration_s / cfg.dt_s));
  enc.ownship_script.reserve(n + 1);
  enc.intruder_script.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = i * cfg.dt_s;
    AircraftState own;
    own.east = f.ownship_speed * uo_e * t;
    own.north = f.ownship_speed * uo_n * t;
    own.up = 0.0;
    own.heading_deg = own_heading;
    own.ground_speed = f.ownship_speed;
    enc.ownship_script.push_back(own);

    AircraftState intr;
    intr.east = cpa_int_e + (t - T) * f.intruder_speed * ui_e;
    intr.north = cpa_int_n + (t - T) * f.intruder_speed * ui_n;
    intr.up = f.vmd + (t - T) * cfg.intruder_vertical_rate;
    intr.heading_deg = int_heading;
    intr.ground_speed = f.intruder_speed;
    intr.vertical_rate = cfg.intruder_vertical_rate;
    enc.intruder_script.push_back(intr);
  }
  return enc;
}

void place_in_region(Encounter& enc, Rng& rng, const PlacementConfig& cfg) {
  const double alpha = cfg.rotate ? rng.uniform(0.0, 360.0) : 0.0;
  const double shift_e = rng.uniform(-cfg.max_east_north, cfg.max_east_north);
  const double shift_n = rng.uniform(-cfg.max_east_north, cfg.max_east_north);
  const double shift_u = rng.uniform(-cfg.max_altitude, cfg.max_altitude);
  const double ca = std::cos(alpha * kDegToRad);
  const double sa = std::sin(alpha * kDegToRad);

  auto apply = [&](AircraftState& s) {
    // Rotation that adds alpha to every compass heading.
    const double e = s.east * ca + s.north * sa;
    const double n = s.north * ca - s.east * sa;
    s.east = e + shift_e;
    s.north = n + shift_n;
    s.heading_deg = wrap_heading_deg(s.heading_deg + alpha);
  };
  for (auto& s : enc.ownship_script) apply(s);
  for (auto& s : enc.intruder_script) apply(s);
  // The altitude offset is the safety-critical relative quantity; shift the
  // ownship and rebase the intruder so the offset survives bit-exactly.
  for (std::size_t i = 0; i < enc.ownship_script.size(); ++i) {
    const double offset = enc.intruder_script[i].up - enc.ownship_script[i].up;
    enc.ownship_script[i].up += shift_u;
    enc.intruder_script[i].up = enc.ownship_script[i].up + offset;
  }
  enc.placed = true;
}

Conditions sample_conditions(Rng& rng) {
  Conditions c;
  c.weather = static_cast<Weather>(rng.uniform_index(kNumWeather));
  c.region = static_cast<Region>(rng.uniform_index(kNumRegions));
  c.aircraft = static_cast<AircraftClassName>(rng.uniform_index(kNumAircraftClasses));
  c.local_time = rng.uniform(8.0, 17.0);
  return c;
}

std::vector<ConditionCell> condition_grid() {
  std::vector<ConditionCell> cells;
  cells.reserve(kNumWeather * kNumRegions * kNumTimeWindows * kNumAircraftClasses);
  for (int w = 0; w < kNumWeather; ++w) {
    for (int r = 0; r < kNumRegions; ++r) {
      for (int t = 0; t < kNumTimeWindows; ++t) {
        for (int a = 0; a < kNumAircraftClasses; ++a) {
          cells.push_back({static_cast<Weather>(w), static_cast<Region>(r),
                           static_cast<TimeWindow>(t),
                           static_cast<AircraftClassName>(a)});
        }
      }
    }
  }
  return cells;
}

Conditions sample_in_cell(const ConditionCell& cell, Rng& rng) {
  Conditions c;
  c.weather = cell.weather;
  c.region = cell.region;
  c.aircraft = cell.aircraft;
  const auto [lo, hi] = window_bounds(cell.window);
  c.local_time = rng.uniform(lo, hi);
  return c;
}

Encounter sample_encounter(std::uint64_t seed, const EncounterConfig& cfg) {
  Rng rng(seed);
  Encounter enc = build_trajectories(sample_features(rng, cfg.features), cfg);
  place_in_region(enc, rng, cfg.placement);
  enc.conditions = sample_conditions(rng);
  enc.seed = seed;
  return enc;
}

Encounter sample_encounter_in_cell(std::uint64_t seed, const EncounterConfig& cfg,
                                   const ConditionCell& cell) {
  Rng rng(seed);
  Encounter enc = build_trajectories(sample_features(rng, cfg.features), cfg);
  place_in_region(enc, rng, cfg.placement);
  enc.conditions = sample_in_cell(cell, rng);
  enc.seed = seed;
  return enc;
}

double min_range_for(const SceneConfig& cfg, AircraftClassName cls) {
  return cls == AircraftClassName::Boeing737 ? cfg.min_range_boeing
                                             : cfg.min_range_small;
}

int gamma_shape_for(const SceneConfig& cfg, AircraftClassName cls) {
  return cls == AircraftClassName::Boeing737 ? cfg.gamma_shape_boeing
                                             : cfg.gamma_shape_small;
}

namespace {

SceneSpec sample_scene_impl(Rng& rng, const SceneConfig& cfg, Conditions cond) {
  SceneSpec s;
  s.conditions = cond;
  s.ownship.east = rng.uniform(-cfg.max_east_north, cfg.max_east_north);
  s.ownship.north = rng.uniform(-cfg.max_east_north, cfg.max_east_north);
  s.ownship.up = rng.uniform(-cfg.max_altitude, cfg.max_altitude);
  s.ownship.heading_deg = rng.uniform(0.0, 360.0);
  s.ownship.pitch_deg =
      std::clamp(rng.normal(0.0, cfg.pitch_sigma), -cfg.pitch_clip, cfg.pitch_clip);
  s.ownship.roll_deg =
      std::clamp(rng.normal(0.0, cfg.roll_sigma), -cfg.roll_clip, cfg.roll_clip);

  const int shape = gamma_shape_for(cfg, cond.aircraft);
  const double min_range = min_range_for(cfg, cond.aircraft);
  // Rejection rather than clamping: clamping would pile mass at the minimum.
  do {
    s.intruder_range = rng.gamma_int(shape, cfg.gamma_scale);
  } while (!(s.intruder_range > min_range));

  s.bearing_frac = rng.uniform();
  s.elevation_frac = rng.uniform();
  return s;
}

}  // namespace

SceneSpec sample_image_scene(Rng& rng, const SceneConfig& cfg) {
  Conditions cond;
  cond.weather = static_cast<Weather>(rng.uniform_index(kNumWeather));
  cond.region = static_cast<Region>(rng.uniform_index(kNumRegions));
  cond.aircraft = static_cast<AircraftClassName>(rng.uniform_index(kNumAircraftClasses));
  cond.local_time = rng.uniform(cfg.time_lo, cfg.time_hi);
  return sample_scene_impl(rng, cfg, cond);
}

SceneSpec sample_image_scene(Rng& rng, const SceneConfig& cfg, Weather weather,
                             Region region, AircraftClassName aircraft) {
  Conditions cond;
  cond.weather = weather;
  cond.region = region;
  cond.aircraft = aircraft;
  cond.local_time = rng.uniform(cfg.time_lo, cfg.time_hi);
  return sample_scene_impl(rng, cfg, cond);
}

AircraftState scene_intruder_state(const SceneSpec& scene, const CameraModel& cam) {
  // Fractions are image coordinates: the projected box center lands exactly
  // at (bearing_frac, elevation_frac). Inverse of the pinhole mapping.
  const double tan_half_h = std::tan(0.5 * cam.hfov_deg * kDegToRad);
  const double tan_half_v = std::tan(0.5 * cam.vfov_deg() * kDegToRad);
  const double bearing =
      std::atan((2.0 * scene.bearing_frac - 1.0) * tan_half_h) * kRadToDeg;
  const double elevation =
      -std::atan((2.0 * scene.elevation_frac - 1.0) * tan_half_v) * kRadToDeg;
  const auto ray = camera_ray_to_world(scene.ownship, bearing, elevation);
  AircraftState intr;
  intr.east = scene.ownship.east + scene.intruder_range * ray[0];
  intr.north = scene.ownship.north + scene.intruder_range * ray[1];
  intr.up = scene.ownship.up + scene.intruder_range * ray[2];
  return intr;
}

}  // namespace daa
