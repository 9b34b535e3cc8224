#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "daa/encounters.hpp"
#include "daa/geometry.hpp"
#include "daa/rng.hpp"

namespace daa {

enum class PerceptionSource { Perfect, Stochastic, BoxGeometry, External };

struct IntruderEstimate {
  RelativeGeometry rel;
  std::optional<BoundingBox> detected_box;
  PerceptionSource source = PerceptionSource::Perfect;
};

// Recall per slant-range bucket with optional per-facet multipliers; the
// composed probability is clamped to [0, 1].
struct DetectorProfile {
  struct RangeRecall {
    double range_upper_m;  // strictly increasing; last bucket open-ended
    double probability;
  };
  std::vector<RangeRecall> recall_by_range;
  std::map<Weather, double> weather_multipliers;
  std::map<TimeWindow, double> time_multipliers;
  double probability_scale = 1.0;
};

// Range-bucket recall of the reference detector; multipliers default to 1.
DetectorProfile default_detector_profile();

// Per-weather recall divided by overall recall, for optional condition
// degradation studies.
std::map<Weather, double> reference_weather_multipliers();

// Composed detection probability for the profile at a slant range.
double detection_probability(const DetectorProfile& profile, double slant_range_m,
                             const Conditions& cond);

// Gaussian perturbation of the truth geometry handed to the controller;
// disabled by default.
struct EstimateNoise {
  bool enabled = false;
  double bearing_sigma_deg = 0.0;
  double elevation_sigma_deg = 0.0;
  double range_sigma_frac = 0.0;  // relative sigma on horizontal range
};

struct PerceptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Detection layer interface. Backends are cloned once per batch worker; the
// RNG is externally owned so runs are reproducible.
class Perception {
 public:
  virtual ~Perception() = default;
  virtual std::optional<IntruderEstimate> perceive(const AircraftState& ownship,
                                                   const AircraftState& intruder,
                                                   const Conditions& conditions,
                                                   Rng& rng) = 0;
  virtual std::unique_ptr<Perception> clone() const = 0;
  virtual const char* name() const = 0;
};

using ClassTable = std::array<AircraftClass, kNumAircraftClasses>;
ClassTable default_class_table();
const AircraftClass& class_for(const ClassTable& table, AircraftClassName name);

// Never detects; the controller stays at COC throughout.
std::unique_ptr<Perception> make_blind_perception();

// Detects whenever the intruder center is in the camera field of view and
// passes the truth relative geometry onward.
std::unique_ptr<Perception> make_perfect_perception(const CameraModel& cam,
                                                    const ClassTable& classes);

// FOV gate first, then detection ~ Bernoulli(p) with p from the profile.
// Exactly one uniform is drawn per call whether or not the intruder is in
// view, so detection sets are monotone in p under a shared seed stream.
std::unique_ptr<Perception> make_stochastic_perception(
    const CameraModel& cam, const ClassTable& classes, DetectorProfile profile,
    EstimateNoise noise = {});

// Projects the truth to a box, then estimates the state from the box alone;
// the estimate error is the projection round-trip error.
std::unique_ptr<Perception> make_box_geometry_perception(const CameraModel& cam,
                                                         const ClassTable& classes);

// Newline-delimited JSON to a child process (stdin/stdout) or a TCP endpoint
// ("tcp://host:port"). One request line per call:
//   {"id": n, "image": "path"?, "scene": {"ownship": {...}},
//    "camera": {"hfovDeg": .., "imageWidth": .., "imageHeight": ..}}
// expecting a matching-id response:
//   {"id": n, "boxes": [{"cx":f,"cy":f,"w":f,"h":f,"conf":f}, ...]}
// An empty box list means undetected. Timeouts and malformed responses either
// surface as undetected-with-warning or throw PerceptionError, per hard_fail.
struct DetectorEndpoint {
  std::string spec;        // command line, or tcp://host:port
  int timeout_ms = 5000;
  bool hard_fail = false;
};

std::unique_ptr<Perception> make_external_perception(const CameraModel& cam,
                                                     const ClassTable& classes,
                                                     DetectorEndpoint endpoint);

}  // namespace daa
