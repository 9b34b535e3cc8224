#pragma once

#include "daa/cas.hpp"
#include "daa/encounters.hpp"
#include "daa/perception.hpp"
#include "daa/rng.hpp"
#include "daa/simulator_types.hpp"

namespace daa {

// One kinematic step: the vertical rate moves toward the command's resolved
// target with |delta| <= accel_limit * dt, altitude advances by the trapezoid
// of old/new rates, and horizontal motion continues along the current track.
AircraftState step_ownship(const AircraftState& state, const VerticalCommand& cmd,
                           double dt, double accel_limit);

// Close the loop over one encounter: perceive, build the controller state
// (tau from compute_tau, rates by differencing detections, previous advisory
// tracked), query the policy (undetected forces COC), step the ownship.
// The intruder follows its script exactly; the ownship keeps the scripted
// horizontal channel and integrates the vertical channel. One decision per dt
// over [0, duration); the final state still counts toward separations.
EncounterResult run_encounter(const Encounter& enc, Perception& perception,
                              const PolicyTable& policy, const SimConfig& cfg,
                              Rng& rng, int id = 0);

// Deterministic for any worker count: encounter i uses Rng::child(master_seed,
// i) and its own perception clone; results are ordered by encounter index.
// Per-encounter failures are recorded without aborting unless fail_fast.
BatchResult run_batch(const std::vector<Encounter>& encounters,
                      const Perception& perception_prototype,
                      const PolicyTable& policy, const SimConfig& cfg,
                      std::uint64_t master_seed, int workers);

}  // namespace daa
