#include <algorithm>
#include <cmath>
#include <cstddef>

#include "daa/cas.hpp"

namespace daa {

const char* advisory_name(Advisory a) {
  switch (a) {
    case Advisory::COC: return "COC";
    case Advisory::DNC: return "DNC";
    case Advisory::DND: return "DND";
    case Advisory::DES1500: return "DES1500";
    case Advisory::CL1500: return "CL1500";
    case Advisory::SDES1500: return "SDES1500";
    case Advisory::SCL1500: return "SCL1500";
    case Advisory::SDES2500: return "SDES2500";
    case Advisory::SCL2500: return "SCL2500";
  }
  return "?";
}

std::optional<Advisory> parse_advisory(const std::string& s) {
  for (int i = 0; i < kNumAdvisories; ++i) {
    const Advisory a = static_cast<Advisory>(i);
    if (s == advisory_name(a)) return a;
  }
  return std::nullopt;
}

int advisory_sense(Advisory a) {
  switch (a) {
    case Advisory::COC: return 0;
    case Advisory::DNC:
    case Advisory::DES1500:
    case Advisory::SDES1500:
    case Advisory::SDES2500: return -1;
    case Advisory::DND:
    case Advisory::CL1500:
    case Advisory::SCL1500:
    case Advisory::SCL2500: return 1;
  }
  return 0;
}

int advisory_strength(Advisory a) {
  switch (a) {
    case Advisory::COC: return 0;
    case Advisory::DNC:
    case Advisory::DND: return 1;
    case Advisory::DES1500:
    case Advisory::CL1500: return 2;
    case Advisory::SDES1500:
    case Advisory::SCL1500: return 3;
    case Advisory::SDES2500:
    case Advisory::SCL2500: return 4;
  }
  return 0;
}

VerticalCommand advisory_command(Advisory a) {
  using K = VerticalCommand::Kind;
  switch (a) {
    case Advisory::COC: return {K::Unconstrained, 0.0};
    case Advisory::DNC: return {K::UpperBound, 0.0};
    case Advisory::DND: return {K::LowerBound, 0.0};
    case Advisory::DES1500: return {K::TargetRate, -kRate1500};
    case Advisory::CL1500: return {K::TargetRate, kRate1500};
    case Advisory::SDES1500: return {K::TargetRate, -kRate1500};
    case Advisory::SCL1500: return {K::TargetRate, kRate1500};
    case Advisory::SDES2500: return {K::TargetRate, -kRate2500};
    case Advisory::SCL2500: return {K::TargetRate, kRate2500};
  }
  return {K::Unconstrained, 0.0};
}

double command_target_rate(const VerticalCommand& cmd, double current_rate) {
  using K = VerticalCommand::Kind;
  switch (cmd.kind) {
    case K::Unconstrained: return 0.0;  // resume level flight
    case K::UpperBound: return current_rate > cmd.value ? cmd.value : current_rate;
    case K::LowerBound: return current_rate < cmd.value ? cmd.value : current_rate;
    case K::TargetRate: return cmd.value;
  }
  return current_rate;
}

double apply_command(const VerticalCommand& cmd, double current_rate, double dt,
                     double accel_limit) {
  const double target = command_target_rate(cmd, current_rate);
  const double max_delta = accel_limit * dt;
  const double delta = std::clamp(target - current_rate, -max_delta, max_delta);
  return current_rate + delta;
}

double own_rate_update(double rate, Advisory a, const ComplianceModel& compliance,
                       double dt) {
  return apply_command(advisory_command(a), rate, dt, compliance.own_accel);
}

double action_cost(const RewardWeights& rewards, Advisory prev, Advisory action) {
  double cost = 0.0;
  if (is_alert(action)) cost += rewards.alert_cost;
  const int sp = advisory_sense(prev);
  const int sa = advisory_sense(action);
  if (sp != 0 && sa != 0) {
    if (sp != sa) {
      cost += rewards.reversal_cost;
    } else if (advisory_strength(action) > advisory_strength(prev)) {
      cost += rewards.strengthen_cost;
    }
  }
  return cost;
}

double terminal_reward(const MdpSpec& spec, double h) {
  return std::abs(h) < spec.nmac_altitude ? spec.rewards.nmac_penalty : 0.0;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return v;
}

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
  }
  for (double x : g) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(name) + " grid has a non-finite entry");
    }
  }
}

}  // namespace

MdpSpec default_mdp_spec() {
  MdpSpec spec;
  spec.h_grid = linspace(-914.4, 914.4, 33);
  spec.dh_own_grid = linspace(-15.24, 15.24, 9);
  spec.dh_int_grid = linspace(-10.0, 10.0, 5);
  spec.tau_grid = linspace(0.0, 40.0, 41);
  spec.actions.resize(kNumAdvisories);
  for (int i = 0; i < kNumAdvisories; ++i) spec.actions[i] = static_cast<Advisory>(i);
  return spec;
}

void validate_mdp(const MdpSpec& spec) {
  check_grid(spec.h_grid, "h");
  check_grid(spec.dh_own_grid, "dh_own");
  check_grid(spec.dh_int_grid, "dh_int");
  check_grid(spec.tau_grid, "tau");
  if (spec.actions.empty()) throw std::invalid_argument("empty action set");
  for (std::size_t i = 0; i < spec.actions.size(); ++i) {
    for (std::size_t k = i + 1; k < spec.actions.size(); ++k) {
      if (spec.actions[i] == spec.actions[k]) {
        throw std::invalid_argument("duplicate advisory in action set");
      }
    }
  }
  if (!(spec.discount > 0.0) || spec.discount > 1.0) {
    throw std::invalid_argument("discount must lie in (0, 1]");
  }
  if (!(spec.rewards.nmac_penalty < 0.0)) {
    throw std::invalid_argument("nmac_penalty must be negative");
  }
  if (!(spec.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(spec.nmac_altitude > 0.0)) {
    throw std::invalid_argument("nmac_altitude must be positive");
  }
  if (!(spec.compliance.own_accel > 0.0)) {
    throw std::invalid_argument("own_accel must be positive");
  }
  if (spec.compliance.intruder_accel < 0.0) {
    throw std::invalid_argument("intruder_accel must be non-negative");
  }
  if (spec.compliance.intruder_accel_prob < 0.0 ||
      spec.compliance.intruder_accel_prob > 0.5) {
    throw std::invalid_argument("intruder_accel_prob must lie in [0, 0.5]");
  }
  // tau must be a 0-based uniform dt ladder: the transition walks exactly one
  // grid level per step.
  if (std::abs(spec.tau_grid.front()) > 1e-9) {
    throw std::invalid_argument("tau grid must start at 0");
  }
  for (std::size_t i = 1; i < spec.tau_grid.size(); ++i) {
    if (std::abs(spec.tau_grid[i] - spec.tau_grid[i - 1] - spec.dt) > 1e-9) {
      throw std::invalid_argument("tau grid spacing must equal dt");
    }
  }
  if (spec.num_nodes() > (1ull << 31)) {
    throw std::invalid_argument("grid too large (node count exceeds 2^31)");
  }
}

int PolicyTable::action_index(Advisory a) const {
  for (std::size_t i = 0; i < spec.actions.size(); ++i) {
    if (spec.actions[i] == a) return static_cast<int>(i);
  }
  throw std::invalid_argument(std::string("advisory ") + advisory_name(a) +
                              " is not in the policy action set");
}

GridCoef interp_coef(const std::vector<double>& grid, double x) {
  GridCoef c;
  const int n = static_cast<int>(grid.size());
  if (n == 1) return c;  // lo == hi == 0, w = 0
  if (x <= grid.front()) return {0, 1, 0.0};
  if (x >= grid.back()) return {n - 2, n - 1, 1.0};
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (grid[mid] <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  c.lo = lo;
  c.hi = lo + 1;
  c.w = (x - grid[lo]) / (grid[lo + 1] - grid[lo]);
  return c;
}

std::vector<double> query_q(const PolicyTable& table, const CasState& state) {
  const MdpSpec& spec = table.spec;
  const int prev = table.action_index(state.prev_advisory);
  const GridCoef ch = interp_coef(spec.h_grid, state.h);
  const GridCoef cd = interp_coef(spec.dh_own_grid, state.dh_own);
  const GridCoef ci = interp_coef(spec.dh_int_grid, state.dh_int);
  const GridCoef ct = interp_coef(spec.tau_grid, state.tau);

  const std::size_t n_actions = spec.num_actions();
  std::vector<double> q(n_actions, 0.0);
  const GridCoef* coefs[4] = {&ch, &cd, &ci, &ct};
  for (int corner = 0; corner < 16; ++corner) {
    double w = 1.0;
    std::size_t idx[4];
    for (int d = 0; d < 4; ++d) {
      const bool hi = (corner >> d) & 1;
      const GridCoef& c = *coefs[d];
      idx[d] = hi ? c.hi : c.lo;
      w *= hi ? c.w : 1.0 - c.w;
    }
    if (w == 0.0) continue;
    const std::size_t node = table.node_index(idx[0], idx[1], idx[2], idx[3]);
    const double* row = table.q.data() + (node * n_actions + prev) * n_actions;
    for (std::size_t a = 0; a < n_actions; ++a) q[a] += w * row[a];
  }
  return q;
}

Advisory query_policy(const PolicyTable& table, const CasState& state) {
  const std::vector<double> q = query_q(table, state);
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a) {
    if (q[a] > q[best]) best = a;
  }
  return table.spec.actions[best];
}

double compute_tau(const RelativeGeometry& rel, double tau_max) {
  constexpr double closing_eps = 1e-6;
  if (rel.horizontal_range <= kNmacHorizontalM) return 0.0;
  if (rel.horizontal_closing_speed <= closing_eps) return tau_max;
  const double tau =
      (rel.horizontal_range - kNmacHorizontalM) / rel.horizontal_closing_speed;
  return std::min(tau, tau_max);
}

}  // namespace daa
