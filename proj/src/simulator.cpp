#include "daa/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "daa/metrics.hpp"

namespace daa {

AircraftState step_ownship(const AircraftState& state, const VerticalCommand& cmd,
                           double dt, double accel_limit) {
  AircraftState next = state;
  const double new_rate = apply_command(cmd, state.vertical_rate, dt, accel_limit);
  next.up = state.up + 0.5 * (state.vertical_rate + new_rate) * dt;
  next.vertical_rate = new_rate;
  next.east = state.east + state.ground_speed * std::sin(state.heading_deg * kDegToRad) * dt;
  next.north = state.north + state.ground_speed * std::cos(state.heading_deg * kDegToRad) * dt;
  return next;
}

namespace {

// Linear-segment NMAC test between consecutive samples: horizontal separation
// squared is quadratic in t, vertical separation linear; intersect the
// sub-interval where each is below its threshold.
bool segment_nmac(const AircraftState& own0, const AircraftState& own1,
                  const AircraftState& int0, const AircraftState& int1) {
  const double pe = int0.east - own0.east;
  const double pn = int0.north - own0.north;
  const double ve = (int1.east - own1.east) - pe;
  const double vn = (int1.north - own1.north) - pn;
  const double pu = int0.up - own0.up;
  const double vu = (int1.up - own1.up) - pu;

  // Horizontal: |p + t v|^2 < R^2 on [0, 1].
  const double a = ve * ve + vn * vn;
  const double b = 2.0 * (pe * ve + pn * vn);
  const double c = pe * pe + pn * pn - kNmacHorizontalM * kNmacHorizontalM;
  double h_lo = 0.0, h_hi = 1.0;
  if (a < 1e-12) {
    if (c >= 0.0) return false;  // constant separation, outside
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) return false;  // never dips inside
    const double sq = std::sqrt(disc);
    h_lo = std::max(0.0, (-b - sq) / (2.0 * a));
    h_hi = std::min(1.0, (-b + sq) / (2.0 * a));
    if (h_lo >= h_hi) return false;
  }

  // Vertical: |pu + t vu| < V.
  double v_lo = 0.0, v_hi = 1.0;
  if (std::abs(vu) < 1e-12) {
    if (std::abs(pu) >= kNmacVerticalM) return false;
  } else {
    const double t1 = (-kNmacVerticalM - pu) / vu;
    const double t2 = (kNmacVerticalM - pu) / vu;
    v_lo = std::max(0.0, std::min(t1, t2));
    v_hi = std::min(1.0, std::max(t1, t2));
    if (v_lo >= v_hi) return false;
  }
  return std::max(h_lo, v_lo) < std::min(h_hi, v_hi);
}

}  // namespace

EncounterResult run_encounter(const Encounter& enc, Perception& perception,
                              const PolicyTable& policy, const SimConfig& cfg,
                              Rng& rng, int id) {
  const int n = enc.steps();
  EncounterResult res;
  res.id = id;
  res.seed = enc.seed;
  res.conditions = enc.conditions;
  res.total_steps = n;
  res.min_horizontal_sep = std::numeric_limits<double>::infinity();
  res.min_vertical_sep_at_min_horizontal = std::numeric_limits<double>::infinity();
  if (cfg.record_steps) res.steps.reserve(n);

  AircraftState own = enc.ownship_script.front();
  Advisory prev_advisory = Advisory::COC;
  struct LastDetection {
    double horizontal_range;
    double vertical_offset;
    int step;
  };
  std::optional<LastDetection> last_det;

  auto note_separation = [&](const RelativeGeometry& rel) {
    if (rel.horizontal_range < res.min_horizontal_sep) {
      res.min_horizontal_sep = rel.horizontal_range;
      res.min_vertical_sep_at_min_horizontal = std::abs(rel.vertical_offset);
    }
    if (is_nmac(rel)) res.nmac = true;
  };

  for (int i = 0; i < n; ++i) {
    const AircraftState& intr = enc.intruder_script[i];
    note_separation(relative_geometry(own, intr));

    std::optional<IntruderEstimate> est;
    try {
      est = perception.perceive(own, intr, enc.conditions, rng);
    } catch (const PerceptionError& e) {
      throw PerceptionError("step " + std::to_string(i) + ": " + e.what());
    }

    Advisory advisory = Advisory::COC;
    if (est) {
      CasState cs;
      cs.h = est->rel.vertical_offset;
      cs.dh_own = own.vertical_rate;
      cs.prev_advisory = prev_advisory;
      RelativeGeometry for_tau = est->rel;
      if (last_det && i > last_det->step) {
        const double gap = (i - last_det->step) * cfg.dt;
        for_tau.horizontal_closing_speed =
            (last_det->horizontal_range - est->rel.horizontal_range) / gap;
        cs.dh_int = (est->rel.vertical_offset - last_det->vertical_offset) / gap +
                    own.vertical_rate;
      } else {
        for_tau.horizontal_closing_speed = 0.0;  // first sighting: assume diverging
        cs.dh_int = 0.0;
      }
      cs.tau = compute_tau(for_tau, cfg.tau_max);
      advisory = query_policy(policy, cs);
      last_det = {est->rel.horizontal_range, est->rel.vertical_offset, i};
    }

    if (is_alert(advisory)) ++res.alert_steps;
    const VerticalCommand cmd = advisory_command(advisory);
    const AircraftState stepped = step_ownship(own, cmd, cfg.dt, cfg.vertical_accel_limit);

    AircraftState next = enc.ownship_script[i + 1];  // horizontal channel from script
    next.up = stepped.up;
    next.vertical_rate = stepped.vertical_rate;

    if (cfg.record_steps) {
      StepRecord rec;
      rec.t = i * cfg.dt;
      rec.ownship = own;
      rec.intruder = intr;
      rec.detected = est.has_value();
      rec.advisory = advisory;
      rec.commanded_rate = command_target_rate(cmd, own.vertical_rate);
      rec.actual_rate = next.vertical_rate;
      res.steps.push_back(rec);
    }
    if (cfg.interpolated_nmac && !res.nmac) {
      if (segment_nmac(own, next, intr, enc.intruder_script[i + 1])) res.nmac = true;
    }

    prev_advisory = advisory;
    own = next;
  }
  note_separation(relative_geometry(own, enc.intruder_script[n]));
  return res;
}

BatchResult run_batch(const std::vector<Encounter>& encounters,
                      const Perception& perception_prototype,
                      const PolicyTable& policy, const SimConfig& cfg,
                      std::uint64_t master_seed, int workers) {
  BatchResult batch;
  batch.master_seed = master_seed;
  batch.results.resize(encounters.size());
  if (encounters.empty()) return batch;

  const int n = static_cast<int>(encounters.size());
  workers = std::max(1, std::min(workers <= 0 ? static_cast<int>(
                                                    std::thread::hardware_concurrency())
                                              : workers,
                                 n));

  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::vector<std::exception_ptr> fatal(workers);

  auto worker_fn = [&](int w) {
    auto perception = perception_prototype.clone();
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || stop.load()) break;
      Rng rng = Rng::child(master_seed, static_cast<std::uint64_t>(i));
      try {
        batch.results[i] =
            run_encounter(encounters[i], *perception, policy, cfg, rng, i);
      } catch (const std::exception& e) {
        EncounterResult& res = batch.results[i];
        res.id = i;
        res.seed = encounters[i].seed;
        res.conditions = encounters[i].conditions;
        res.failed = true;
        res.error = e.what();
        if (cfg.fail_fast) {
          fatal[w] = std::current_exception();
          stop.store(true);
          break;
        }
      }
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : fatal) {
    if (e) std::rethrow_exception(e);
  }
  return batch;
}

}  // namespace daa
