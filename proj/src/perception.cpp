#include "daa/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace daa {

ClassTable default_class_table() {
  return {default_aircraft_class(AircraftClassName::CessnaSkyhawk),
          default_aircraft_class(AircraftClassName::Boeing737),
          default_aircraft_class(AircraftClassName::KingAirC90)};
}

const AircraftClass& class_for(const ClassTable& table, AircraftClassName name) {
  return table[static_cast<int>(name)];
}

DetectorProfile default_detector_profile() {
  DetectorProfile p;
  p.recall_by_range = {{150.0, 0.983},
                       {500.0, 0.960},
                       {std::numeric_limits<double>::infinity(), 0.818}};
  return p;
}

std::map<Weather, double> reference_weather_multipliers() {
  // Per-weather recall relative to the overall 0.907.
  const double overall = 0.907;
  return {{Weather::Clear, 0.905 / overall},   {Weather::HighCirrus, 0.930 / overall},
          {Weather::Scattered, 0.923 / overall}, {Weather::Broken, 0.921 / overall},
          {Weather::Overcast, 0.920 / overall}, {Weather::Stratus, 0.846 / overall}};
}

double detection_probability(const DetectorProfile& profile, double slant_range_m,
                             const Conditions& cond) {
  double p = 0.0;
  for (const auto& bucket : profile.recall_by_range) {
    p = bucket.probability;
    if (slant_range_m < bucket.range_upper_m) break;
  }
  if (auto it = profile.weather_multipliers.find(cond.weather);
      it != profile.weather_multipliers.end()) {
    p *= it->second;
  }
  if (auto it = profile.time_multipliers.find(time_of_day_window(cond.local_time));
      it != profile.time_multipliers.end()) {
    p *= it->second;
  }
  p *= profile.probability_scale;
  return std::clamp(p, 0.0, 1.0);
}

namespace {

double slant_range(const AircraftState& own, const AircraftState& intr) {
  const double de = intr.east - own.east;
  const double dn = intr.north - own.north;
  const double du = intr.up - own.up;
  return std::sqrt(de * de + dn * dn + du * du);
}

class BlindPerception final : public Perception {
 public:
  std::optional<IntruderEstimate> perceive(const AircraftState&, const AircraftState&,
                                           const Conditions&, Rng&) override {
    return std::nullopt;
  }
  std::unique_ptr<Perception> clone() const override {
    return std::make_unique<BlindPerception>();
  }
  const char* name() const override { return "blind"; }
};

class PerfectPerception final : public Perception {
 public:
  PerfectPerception(const CameraModel& cam, const ClassTable& classes)
      : cam_(cam), classes_(classes) {}

  std::optional<IntruderEstimate> perceive(const AircraftState& own,
                                           const AircraftState& intr,
                                           const Conditions& cond, Rng&) override {
    if (!in_field_of_view(cam_, relative_geometry_camera(own, intr))) {
      return std::nullopt;
    }
    IntruderEstimate est;
    est.rel = relative_geometry(own, intr);
    est.detected_box =
        project_to_image(cam_, own, intr, class_for(classes_, cond.aircraft));
    est.source = PerceptionSource::Perfect;
    return est;
  }
  std::unique_ptr<Perception> clone() const override {
    return std::make_unique<PerfectPerception>(cam_, classes_);
  }
  const char* name() const override { return "perfect"; }

 private:
  CameraModel cam_;
  ClassTable classes_;
};

class StochasticPerception final : public Perception {
 public:
  StochasticPerception(const CameraModel& cam, const ClassTable& classes,
                       DetectorProfile profile, EstimateNoise noise)
      : cam_(cam), classes_(classes), profile_(std::move(profile)), noise_(noise) {}

  std::optional<IntruderEstimate> perceive(const AircraftState& own,
                                           const AircraftState& intr,
                                           const Conditions& cond, Rng& rng) override {
    // One uniform per step regardless of the FOV outcome keeps detection sets
    // coupled monotonically across probability scales under a shared seed.
    const double u = rng.uniform();
    if (!in_field_of_view(cam_, relative_geometry_camera(own, intr))) {
      return std::nullopt;
    }
    const double p = detection_probability(profile_, slant_range(own, intr), cond);
    if (u >= p) return std::nullopt;

    IntruderEstimate est;
    est.rel = relative_geometry(own, intr);
    est.detected_box =
        project_to_image(cam_, own, intr, class_for(classes_, cond.aircraft));
    est.source = PerceptionSource::Stochastic;
    if (noise_.enabled) {
      est.rel.bearing_deg =
          wrap_signed_deg(est.rel.bearing_deg + rng.normal(0.0, noise_.bearing_sigma_deg));
      est.rel.elevation_deg += rng.normal(0.0, noise_.elevation_sigma_deg);
      const double scale =
          std::max(0.0, 1.0 + rng.normal(0.0, noise_.range_sigma_frac));
      est.rel.horizontal_range *= scale;
      est.rel.vertical_offset =
          est.rel.horizontal_range * std::tan(est.rel.elevation_deg * kDegToRad);
    }
    return est;
  }
  std::unique_ptr<Perception> clone() const override {
    return std::make_unique<StochasticPerception>(cam_, classes_, profile_, noise_);
  }
  const char* name() const override { return "stochastic"; }

 private:
  CameraModel cam_;
  ClassTable classes_;
  DetectorProfile profile_;
  EstimateNoise noise_;
};

class BoxGeometryPerception final : public Perception {
 public:
  BoxGeometryPerception(const CameraModel& cam, const ClassTable& classes)
      : cam_(cam), classes_(classes) {}

  std::optional<IntruderEstimate> perceive(const AircraftState& own,
                                           const AircraftState& intr,
                                           const Conditions& cond, Rng&) override {
    const AircraftClass& cls = class_for(classes_, cond.aircraft);
    const auto box = project_to_image(cam_, own, intr, cls);
    if (!box) return std::nullopt;
    IntruderEstimate est;
    est.rel = estimate_state_from_box(cam_, *box, cls, own);
    est.detected_box = box;
    est.source = PerceptionSource::BoxGeometry;
    return est;
  }
  std::unique_ptr<Perception> clone() const override {
    return std::make_unique<BoxGeometryPerception>(cam_, classes_);
  }
  const char* name() const override { return "boxgeom"; }

 private:
  CameraModel cam_;
  ClassTable classes_;
};

}  // namespace

std::unique_ptr<Perception> make_blind_perception() {
  return std::make_unique<BlindPerception>();
}

std::unique_ptr<Perception> make_perfect_perception(const CameraModel& cam,
                                                    const ClassTable& classes) {
  return std::make_unique<PerfectPerception>(cam, classes);
}

std::unique_ptr<Perception> make_stochastic_perception(const CameraModel& cam,
                                                       const ClassTable& classes,
                                                       DetectorProfile profile,
                                                       EstimateNoise noise) {
  return std::make_unique<StochasticPerception>(cam, classes, std::move(profile),
                                                noise);
}

std::unique_ptr<Perception> make_box_geometry_perception(const CameraModel& cam,
                                                         const ClassTable& classes) {
  return std::make_unique<BoxGeometryPerception>(cam, classes);
}

}  // namespace daa
