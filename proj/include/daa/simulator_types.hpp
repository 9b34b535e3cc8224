#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daa/cas.hpp"
#include "daa/encounters.hpp"
#include "daa/geometry.hpp"

namespace daa {

struct SimConfig {
  double dt = 1.0;                    // s
  double vertical_accel_limit = 2.45;  // m/s^2
  double tau_max = 40.0;               // s
  bool interpolated_nmac = false;      // also test linear segments between steps
  bool fail_fast = false;              // batch: abort on first encounter failure
  bool record_steps = true;
};

struct StepRecord {
  double t = 0.0;
  AircraftState ownship;   // actual (script horizontal, integrated vertical)
  AircraftState intruder;  // scripted truth
  bool detected = false;
  Advisory advisory = Advisory::COC;
  double commanded_rate = 0.0;  // resolved target handed to the dynamics
  double actual_rate = 0.0;     // ownship vertical rate after the step
};

struct EncounterResult {
  int id = 0;
  std::uint64_t seed = 0;
  bool nmac = false;
  double min_horizontal_sep = 0.0;
  double min_vertical_sep_at_min_horizontal = 0.0;
  int alert_steps = 0;
  int total_steps = 0;
  Conditions conditions;
  std::vector<StepRecord> steps;  // empty when recording is off
  bool failed = false;
  std::string error;
};

struct BatchResult {
  std::vector<EncounterResult> results;
  std::uint64_t master_seed = 0;
};

}  // namespace daa
