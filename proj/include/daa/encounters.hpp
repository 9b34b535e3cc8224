#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daa/geometry.hpp"
#include "daa/rng.hpp"

namespace daa {

enum class Weather { Clear = 0, HighCirrus, Scattered, Broken, Overcast, Stratus };
constexpr int kNumWeather = 6;

enum class Region { PAO = 0, BOS, OSH, RNO };
constexpr int kNumRegions = 4;

enum class TimeWindow { Morning = 0, Midday, Afternoon, LateAfternoon };
constexpr int kNumTimeWindows = 4;

const char* weather_name(Weather w);
const char* region_name(Region r);
const char* time_window_name(TimeWindow t);
std::optional<Weather> parse_weather(const std::string& s);
std::optional<Region> parse_region(const std::string& s);

// Day split: morning [8,10), midday [10,13), afternoon [13,15),
// late afternoon [15,17]. Hours outside [8,17] are clamped to the ends.
TimeWindow time_of_day_window(double local_time_hours);

struct Conditions {
  Weather weather = Weather::Clear;
  Region region = Region::PAO;
  AircraftClassName aircraft = AircraftClassName::CessnaSkyhawk;
  double local_time = 12.0;  // hours, [8, 17]
};

struct EncounterFeatures {
  double ownship_speed = 0.0;     // m/s
  double intruder_speed = 0.0;    // m/s
  double hmd = 0.0;               // m, horizontal miss distance at CPA
  double vmd = 0.0;               // m, signed vertical miss distance at CPA
  double relative_heading = 0.0;  // deg, intruder track minus ownship track
};

struct FeatureRanges {
  struct Range {
    double lo, hi;
  };
  Range ownship_speed{60.0, 70.0};
  Range intruder_speed{60.0, 70.0};
  Range hmd{0.0, 100.0};
  Range vmd{-30.0, 30.0};
  Range relative_heading{100.0, 260.0};
};

struct PlacementConfig {
  double max_east_north = 5000.0;  // m, shared shift ~ U(-max, max)
  double max_altitude = 1000.0;    // m
  bool rotate = true;              // shared rotation ~ U(0, 360) about vertical
};

struct EncounterConfig {
  FeatureRanges features;
  double duration_s = 50.0;
  double cpa_time_s = 40.0;
  double dt_s = 1.0;
  double intruder_vertical_rate = 0.0;  // optional constant climb/descent
  PlacementConfig placement;
};

// Paired scripted trajectories sampled at dt_s. Both tracks are straight
// lines at constant horizontal speed; the planar separation at cpa_time_s is
// exactly hmd and the altitude offset exactly vmd (for a level intruder).
struct Encounter {
  std::vector<AircraftState> ownship_script;
  std::vector<AircraftState> intruder_script;
  double duration_s = 50.0;
  double cpa_time_s = 40.0;
  double dt_s = 1.0;
  EncounterFeatures features;
  Conditions conditions;
  std::uint64_t seed = 0;
  bool placed = false;

  int steps() const { return static_cast<int>(ownship_script.size()) - 1; }
};

// Each feature uniform over its configured range. Throws std::invalid_argument
// when a range has lo > hi.
EncounterFeatures sample_features(Rng& rng, const FeatureRanges& ranges);

// Unplaced encounter: ownship starts at the origin heading north; the miss
// vector at CPA is perpendicular to the relative velocity, so the minimum
// planar separation falls exactly at cpa_time_s. Throws std::invalid_argument
// unless 0 < cpa_time_s < duration_s.
Encounter build_trajectories(const EncounterFeatures& features,
                             const EncounterConfig& config);

// Shared random rotation about the vertical axis plus a shared translation;
// relative geometry at every step is invariant.
void place_in_region(Encounter& enc, Rng& rng, const PlacementConfig& cfg);

// Independent draw of every facet; local_time ~ U(8, 17).
Conditions sample_conditions(Rng& rng);

// Full factorial grid: 6 weather x 4 regions x 4 time windows x 3 aircraft.
struct ConditionCell {
  Weather weather;
  Region region;
  TimeWindow window;
  AircraftClassName aircraft;
};
std::vector<ConditionCell> condition_grid();

// Conditions within a cell; local_time uniform inside the cell's window.
Conditions sample_in_cell(const ConditionCell& cell, Rng& rng);

// features -> trajectories -> placement -> conditions, all from one seed.
Encounter sample_encounter(std::uint64_t seed, const EncounterConfig& config);
Encounter sample_encounter_in_cell(std::uint64_t seed, const EncounterConfig& config,
                                   const ConditionCell& cell);

struct SceneConfig {
  double gamma_scale = 200.0;
  int gamma_shape_small = 2;       // Cessna, King Air
  int gamma_shape_boeing = 3;
  double min_range_small = 20.0;   // m, resample below
  double min_range_boeing = 50.0;  // m
  double pitch_sigma = 5.0;        // deg, clipped to +/- pitch_clip
  double pitch_clip = 30.0;
  double roll_sigma = 10.0;
  double roll_clip = 45.0;
  double max_east_north = 5000.0;
  double max_altitude = 1000.0;
  double time_lo = 8.0;
  double time_hi = 17.0;
};

// Single-frame scene: ownship pose plus an intruder placed uniformly within
// the field of view at a gamma-distributed slant range.
struct SceneSpec {
  AircraftState ownship;
  double intruder_range = 0.0;      // m, slant
  double bearing_frac = 0.5;        // [0,1] fraction of horizontal FOV
  double elevation_frac = 0.5;      // [0,1] fraction of vertical FOV
  Conditions conditions;
};

double min_range_for(const SceneConfig& cfg, AircraftClassName cls);
int gamma_shape_for(const SceneConfig& cfg, AircraftClassName cls);

SceneSpec sample_image_scene(Rng& rng, const SceneConfig& cfg);
SceneSpec sample_image_scene(Rng& rng, const SceneConfig& cfg, Weather weather,
                             Region region, AircraftClassName aircraft);

// Camera-frame angles for a FOV-fraction placement and the resulting
// intruder state at the scene's slant range.
AircraftState scene_intruder_state(const SceneSpec& scene, const CameraModel& cam);

}  // namespace daa
