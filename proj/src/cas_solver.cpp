#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>
#include <vector>

#include "daa/cas.hpp"
#include "daa/kernels.hpp"

namespace daa {

namespace {

// Strided static partition: task t runs on thread t % workers. Output arrays
// are disjoint per task, so results are identical for any worker count.
template <typename Fn>
void run_tasks(int n_tasks, int workers, const Fn& fn) {
  workers = std::max(1, std::min(workers, n_tasks));
  if (workers == 1) {
    for (int t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < n_tasks; t += workers) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

struct DimCoefs {
  std::vector<std::int32_t> lo, hi;
  std::vector<double> w;
  void resize(std::size_t n) {
    lo.resize(n);
    hi.resize(n);
    w.resize(n);
  }
  void set(std::size_t j, const GridCoef& c) {
    lo[j] = c.lo;
    hi[j] = c.hi;
    w[j] = c.w;
  }
};

}  // namespace

PolicyTable value_iteration(const MdpSpec& spec, const SolveOptions& opt) {
  validate_mdp(spec);
  if (!(opt.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (opt.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be at least 1");
  }
  const kernels::Backend& backend = kernels::select_backend(opt.simd);
  const int workers =
      opt.workers > 0 ? opt.workers
                      : std::max(1u, std::thread::hardware_concurrency());

  const int nh = static_cast<int>(spec.h_grid.size());
  const int nd = static_cast<int>(spec.dh_own_grid.size());
  const int ni = static_cast<int>(spec.dh_int_grid.size());
  const int nt = static_cast<int>(spec.tau_grid.size());
  const int na = static_cast<int>(spec.actions.size());
  const int m = nh * nd * ni;  // spatial nodes per tau slice
  const std::int32_t stride_h = nd * ni;
  const std::int32_t stride_d = ni;

  // Immediate action costs, [prev][action].
  std::vector<double> costs(static_cast<std::size_t>(na) * na);
  for (int p = 0; p < na; ++p) {
    for (int a = 0; a < na; ++a) {
      costs[static_cast<std::size_t>(p) * na + a] =
          action_cost(spec.rewards, spec.actions[p], spec.actions[a]);
    }
  }

  // Successor interpolation coefficients, flattened per spatial node. The
  // altitude offset propagates with the current rates (h' = h + (dh_int -
  // dh_own) * dt); rates update afterwards.
  DimCoefs h_coef;
  h_coef.resize(m);
  std::vector<double> terminal(m);
  for (int ih = 0; ih < nh; ++ih) {
    for (int id = 0; id < nd; ++id) {
      for (int ii = 0; ii < ni; ++ii) {
        const std::size_t j =
            static_cast<std::size_t>(ih) * stride_h + id * stride_d + ii;
        const double h_next =
            spec.h_grid[ih] +
            (spec.dh_int_grid[ii] - spec.dh_own_grid[id]) * spec.dt;
        h_coef.set(j, interp_coef(spec.h_grid, h_next));
        terminal[j] = terminal_reward(spec, spec.h_grid[ih]);
      }
    }
  }

  std::vector<DimCoefs> d_coef(na);  // ownship rate successor, per action
  for (int a = 0; a < na; ++a) {
    d_coef[a].resize(m);
    for (int id = 0; id < nd; ++id) {
      const GridCoef c = interp_coef(
          spec.dh_own_grid,
          own_rate_update(spec.dh_own_grid[id], spec.actions[a], spec.compliance,
                          spec.dt));
      for (int ih = 0; ih < nh; ++ih) {
        for (int ii = 0; ii < ni; ++ii) {
          d_coef[a].set(static_cast<std::size_t>(ih) * stride_h + id * stride_d + ii,
                        c);
        }
      }
    }
  }

  const double acc_vals[3] = {-spec.compliance.intruder_accel, 0.0,
                              spec.compliance.intruder_accel};
  const double p_edge = spec.compliance.intruder_accel_prob;
  const double probs[3] = {p_edge, 1.0 - 2.0 * p_edge, p_edge};
  DimCoefs i_coef[3];
  for (int k = 0; k < 3; ++k) {
    i_coef[k].resize(m);
    for (int ii = 0; ii < ni; ++ii) {
      const GridCoef c = interp_coef(spec.dh_int_grid,
                                     spec.dh_int_grid[ii] + acc_vals[k] * spec.dt);
      for (int ih = 0; ih < nh; ++ih) {
        for (int id = 0; id < nd; ++id) {
          i_coef[k].set(static_cast<std::size_t>(ih) * stride_h + id * stride_d + ii,
                        c);
        }
      }
    }
  }

  const std::size_t slice = static_cast<std::size_t>(m);
  const std::size_t v_size = static_cast<std::size_t>(nt) * na * slice;
  std::vector<double> v_cur(v_size, 0.0), v_next(v_size, 0.0);
  std::vector<double> e_cur(v_size, 0.0), e_next(v_size, 0.0);
  auto v_at = [&](std::vector<double>& v, int t, int pa) {
    return v.data() + (static_cast<std::size_t>(t) * na + pa) * slice;
  };

  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  const int n_expect_tasks = nt * na;
  std::vector<double> task_residual(n_expect_tasks, 0.0);

  while (iterations < opt.max_iterations) {
    ++iterations;
    run_tasks(n_expect_tasks, workers, [&](int task) {
      const int t = task / na;
      const int a = task % na;
      double* e_out = v_at(e_next, t, a);
      if (t == 0) {
        std::memcpy(e_out, terminal.data(), slice * sizeof(double));
      } else {
        kernels::BellmanArgs args;
        args.v_prev = v_at(v_cur, t - 1, a);
        args.h_lo = h_coef.lo.data();
        args.h_hi = h_coef.hi.data();
        args.h_w = h_coef.w.data();
        args.d_lo = d_coef[a].lo.data();
        args.d_hi = d_coef[a].hi.data();
        args.d_w = d_coef[a].w.data();
        args.i_lo0 = i_coef[0].lo.data();
        args.i_hi0 = i_coef[0].hi.data();
        args.i_w0 = i_coef[0].w.data();
        args.i_lo1 = i_coef[1].lo.data();
        args.i_hi1 = i_coef[1].hi.data();
        args.i_w1 = i_coef[1].w.data();
        args.i_lo2 = i_coef[2].lo.data();
        args.i_hi2 = i_coef[2].hi.data();
        args.i_w2 = i_coef[2].w.data();
        args.p0 = probs[0];
        args.p1 = probs[1];
        args.p2 = probs[2];
        args.gamma = spec.discount;
        args.stride_h = stride_h;
        args.stride_d = stride_d;
        args.e_out = e_out;
        backend.bellman_slice(args, 0, m);
      }
      const double* e_old = v_at(e_cur, t, a);
      double r = 0.0;
      for (int j = 0; j < m; ++j) {
        r = std::max(r, std::abs(e_out[j] - e_old[j]));
      }
      task_residual[task] = r;
    });

    run_tasks(nt, workers, [&](int t) {
      backend.max_combine(v_at(e_next, t, 0), costs.data(), na, na, m,
                          v_at(v_next, t, 0));
    });

    residual = 0.0;
    for (double r : task_residual) residual = std::max(residual, r);
    std::swap(v_cur, v_next);
    std::swap(e_cur, e_next);
    if (residual <= opt.tolerance) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    throw SolveError("value iteration did not converge within " +
                         std::to_string(opt.max_iterations) +
                         " iterations (residual " + std::to_string(residual) + ")",
                     iterations, residual);
  }

  PolicyTable table;
  table.spec = spec;
  table.info.iterations = iterations;
  table.info.residual = residual;
  table.info.backend = backend.name;
  table.q.resize(spec.q_size());
  for (int ih = 0; ih < nh; ++ih) {
    for (int id = 0; id < nd; ++id) {
      for (int ii = 0; ii < ni; ++ii) {
        const std::size_t j =
            static_cast<std::size_t>(ih) * stride_h + id * stride_d + ii;
        for (int t = 0; t < nt; ++t) {
          const std::size_t node = table.node_index(ih, id, ii, t);
          double* row = table.q.data() + node * na * na;
          for (int p = 0; p < na; ++p) {
            for (int a = 0; a < na; ++a) {
              row[static_cast<std::size_t>(p) * na + a] =
                  costs[static_cast<std::size_t>(p) * na + a] +
                  e_cur[(static_cast<std::size_t>(t) * na + a) * slice + j];
            }
          }
        }
      }
    }
  }
  return table;
}

}  // namespace daa
