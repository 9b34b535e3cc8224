#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "daa/geometry.hpp"
#include "daa/kernels.hpp"

namespace daa {

// Vertical advisories. COC is the sole non-alert advisory; enum order is the
// tie-break order for argmax queries (COC wins exact ties).
enum class Advisory : int {
  COC = 0,
  DNC,       // do not climb
  DND,       // do not descend
  DES1500,   // descend 1500 ft/min
  CL1500,    // climb 1500 ft/min
  SDES1500,  // strengthened descend 1500 ft/min
  SCL1500,   // strengthened climb 1500 ft/min
  SDES2500,  // strengthened descend 2500 ft/min
  SCL2500,   // strengthened climb 2500 ft/min
};
constexpr int kNumAdvisories = 9;

// 1500 ft/min and 2500 ft/min in m/s.
constexpr double kRate1500 = 7.62;
constexpr double kRate2500 = 12.7;

const char* advisory_name(Advisory a);
std::optional<Advisory> parse_advisory(const std::string& s);

inline bool is_alert(Advisory a) { return a != Advisory::COC; }

// -1 descend-sense, +1 climb-sense, 0 for COC.
int advisory_sense(Advisory a);
// 0 COC, 1 DNC/DND, 2 1500s, 3 strengthened 1500s, 4 strengthened 2500s.
int advisory_strength(Advisory a);

struct VerticalCommand {
  enum class Kind { Unconstrained, UpperBound, LowerBound, TargetRate };
  Kind kind = Kind::Unconstrained;
  double value = 0.0;  // bound or target vertical rate, m/s
};

// COC -> unconstrained (seek level flight); DNC/DND -> one-sided bound at 0;
// the rest -> rate targets at +/-7.62 or +/-12.7 m/s.
VerticalCommand advisory_command(Advisory a);

// Resolved rate target of a command at the current rate: bounds demand no
// change while already compliant.
double command_target_rate(const VerticalCommand& cmd, double current_rate);

// One step of the compliance dynamics: move toward the command's resolved
// target, |delta rate| <= accel_limit * dt.
double apply_command(const VerticalCommand& cmd, double current_rate, double dt,
                     double accel_limit);

struct RewardWeights {
  double nmac_penalty = -1.0;
  double alert_cost = -0.005;
  double reversal_cost = -0.01;
  double strengthen_cost = -0.008;
};

struct ComplianceModel {
  double own_accel = 2.45;          // m/s^2 toward the commanded rate (g/4)
  double intruder_accel = 1.0;      // m/s^2, 3-point noise {-a, 0, +a}
  double intruder_accel_prob = 0.25;  // P(-a) = P(+a) = p, P(0) = 1 - 2p
};

// MDP over (h, dh_own, dh_int, tau, prev_advisory):
//   h       intruder altitude minus ownship altitude, m
//   dh_own  ownship vertical rate, m/s
//   dh_int  intruder vertical rate, m/s
//   tau     seconds until horizontal conflict; decrements by dt each step,
//           terminal at tau = 0
//
// Transition: h' = h + (dh_int - dh_own) * dt, then dh_own moves toward the
// advisory's resolved target at own_accel (deterministic) and dh_int is
// perturbed by the 3-point acceleration noise. Continuous successors are
// evaluated by multilinear interpolation of the value function
// V(s, prev) = max_a Q(s, prev, a), with prev indexed exactly by the action
// just taken. Terminal reward at tau = 0: nmac_penalty when
// |h| < nmac_altitude, else 0. Per-step action cost: alert_cost for any
// non-COC action, plus reversal_cost when the sense flips against a non-COC
// previous advisory, plus strengthen_cost when the strength rises within the
// same sense.
struct MdpSpec {
  std::vector<double> h_grid;
  std::vector<double> dh_own_grid;
  std::vector<double> dh_int_grid;
  std::vector<double> tau_grid;     // uniform spacing equal to dt, starts at 0
  std::vector<Advisory> actions;    // also the prev-advisory domain
  double discount = 1.0;            // (0, 1]
  RewardWeights rewards;
  ComplianceModel compliance;
  double dt = 1.0;
  double nmac_altitude = kNmacVerticalM;

  std::size_t num_nodes() const {
    return h_grid.size() * dh_own_grid.size() * dh_int_grid.size() * tau_grid.size();
  }
  std::size_t num_actions() const { return actions.size(); }
  std::size_t q_size() const { return num_nodes() * num_actions() * num_actions(); }
};

// h: 33 points over +/-914.4 m; dh_own: 9 over +/-15.24 m/s; dh_int: 5 over
// +/-10 m/s; tau: 41 over [0, 40] s; all 9 advisories.
MdpSpec default_mdp_spec();

// Throws std::invalid_argument on non-monotone grids, bad discount, bad
// reward signs, or a tau grid that is not a 0-based uniform dt ladder.
void validate_mdp(const MdpSpec& spec);

// Immediate cost of taking `action` after `prev` (0 or negative).
double action_cost(const RewardWeights& rewards, Advisory prev, Advisory action);

// nmac_penalty when |h| < spec.nmac_altitude, else 0.
double terminal_reward(const MdpSpec& spec, double h);

// Compliance update used inside the MDP transition.
double own_rate_update(double rate, Advisory a, const ComplianceModel& compliance,
                       double dt);

struct SolveOptions {
  double tolerance = 1e-6;
  int max_iterations = 200;
  int workers = 0;  // <= 0: hardware concurrency
  kernels::Simd simd = kernels::Simd::Auto;
};

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;
  std::string backend;
};

struct SolveError : std::runtime_error {
  SolveError(const std::string& msg, int iters, double res)
      : std::runtime_error(msg), iterations(iters), residual(res) {}
  int iterations;
  double residual;
};

// Solved Q grid. Layout: q[(node * P + prev) * A + action] with
// node = ((ih * ND + id) * NI + ii) * NT + it, P = A = actions.size().
struct PolicyTable {
  MdpSpec spec;
  std::vector<double> q;
  SolveInfo info;

  std::size_t node_index(std::size_t ih, std::size_t id, std::size_t ii,
                         std::size_t it) const {
    return ((ih * spec.dh_own_grid.size() + id) * spec.dh_int_grid.size() + ii) *
               spec.tau_grid.size() +
           it;
  }
  double q_at(std::size_t node, std::size_t prev, std::size_t action) const {
    const std::size_t a = spec.num_actions();
    return q[(node * a + prev) * a + action];
  }
  int action_index(Advisory a) const;  // throws if a is not in the action set
};

// Jacobi sweeps (double-buffered) until the largest Q-entry change is at most
// `tolerance`. Throws SolveError when max_iterations is exceeded.
PolicyTable value_iteration(const MdpSpec& spec, const SolveOptions& opt = {});

struct CasState {
  double h = 0.0;
  double dh_own = 0.0;
  double dh_int = 0.0;
  double tau = 0.0;
  Advisory prev_advisory = Advisory::COC;
};

// Q per action at the state: continuous dims clamped to the grid and
// multilinearly interpolated, prev indexed exactly.
std::vector<double> query_q(const PolicyTable& table, const CasState& state);

// Argmax of query_q; ties broken by action-list order (COC first by default).
Advisory query_policy(const PolicyTable& table, const CasState& state);

// (range - NMAC radius) / closing speed; 0 inside the NMAC radius; tau_max
// when diverging. Capped at tau_max.
double compute_tau(const RelativeGeometry& rel, double tau_max);

// Binary policy file, magic "AVDP". All integers little-endian; Q stored f32
// node-major then prev then action; trailing CRC32 (IEEE) over all preceding
// bytes.
struct PolicyIoError : std::runtime_error {
  enum class Kind { BadMagic, BadVersion, Truncated, BadChecksum, BadValue, Io };
  PolicyIoError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

void save_policy(const PolicyTable& table, const std::string& path);
PolicyTable load_policy(const std::string& path);

// One row per (node, prev) with one Q column per action.
void export_q_csv(const PolicyTable& table, std::ostream& out);

// Grid interpolation coefficient: x clamped to [grid.front(), grid.back()];
// lo/hi bracket x with weight w on hi. Size-1 grids give lo == hi, w = 0.
struct GridCoef {
  int lo = 0;
  int hi = 0;
  double w = 0.0;
};
GridCoef interp_coef(const std::vector<double>& grid, double x);

}  // namespace daa
