// Micro-benchmark for the value-iteration inner loops: times the Bellman
// expectation sweep and the max-combine sweep for every available kernel
// variant on default-sized slices and reports per-node cost and speedup.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "daa/kernels.hpp"
#include "daa/rng.hpp"

using namespace daa;
using namespace daa::kernels;

namespace {

struct SliceInputs {
  int m;
  std::vector<double> v_prev;
  std::vector<std::int32_t> h_lo, h_hi, d_lo, d_hi;
  std::vector<double> h_w, d_w;
  std::vector<std::int32_t> i_lo[3], i_hi[3];
  std::vector<double> i_w[3];
  std::vector<double> e_out;

  SliceInputs(Rng& rng, int nh, int nd, int ni) : m(nh * nd * ni) {
    v_prev.resize(m);
    e_out.resize(m);
    for (auto& v : v_prev) v = rng.uniform(-1.0, 1.0);
    auto fill = [&](std::vector<std::int32_t>& lo, std::vector<std::int32_t>& hi,
                    std::vector<double>& w, int n) {
      lo.resize(m);
      hi.resize(m);
      w.resize(m);
      for (int j = 0; j < m; ++j) {
        const int l = static_cast<int>(rng.uniform_index(n));
        lo[j] = l;
        hi[j] = std::min(l + 1, n - 1);
        w[j] = lo[j] == hi[j] ? 0.0 : rng.uniform();
      }
    };
    fill(h_lo, h_hi, h_w, nh);
    fill(d_lo, d_hi, d_w, nd);
    for (int k = 0; k < 3; ++k) fill(i_lo[k], i_hi[k], i_w[k], ni);
  }

  BellmanArgs args(int nd, int ni) {
    BellmanArgs a;
    a.v_prev = v_prev.data();
    a.h_lo = h_lo.data();
    a.h_hi = h_hi.data();
    a.h_w = h_w.data();
    a.d_lo = d_lo.data();
    a.d_hi = d_hi.data();
    a.d_w = d_w.data();
    a.i_lo0 = i_lo[0].data();
    a.i_hi0 = i_hi[0].data();
    a.i_w0 = i_w[0].data();
    a.i_lo1 = i_lo[1].data();
    a.i_hi1 = i_hi[1].data();
    a.i_w1 = i_w[1].data();
    a.i_lo2 = i_lo[2].data();
    a.i_hi2 = i_hi[2].data();
    a.i_w2 = i_w[2].data();
    a.p0 = 0.25;
    a.p1 = 0.5;
    a.p2 = 0.25;
    a.gamma = 1.0;
    a.stride_h = nd * ni;
    a.stride_d = ni;
    a.e_out = e_out.data();
    return a;
  }
};

template <typename Fn>
double best_of(int trials, const Fn& fn) {
  double best = 1e300;
  for (int t = 0; t < trials; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, s);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 200;
  int trials = 5;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--reps" && i + 1 < argc) {
      reps = std::atoi(argv[++i]);
    } else if (arg == "--trials" && i + 1 < argc) {
      trials = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--reps N] [--trials N]\n", argv[0]);
      return 1;
    }
  }

  // Default solver slice: 33 x 9 x 5 spatial nodes, 9 actions, 9 prevs.
  const int nh = 33, nd = 9, ni = 5, na = 9;
  Rng rng(12345);
  SliceInputs inputs(rng, nh, nd, ni);
  const int m = inputs.m;

  std::vector<double> e(static_cast<std::size_t>(na) * m);
  std::vector<double> costs(static_cast<std::size_t>(na) * na);
  std::vector<double> v_out(static_cast<std::size_t>(na) * m);
  for (auto& x : e) x = rng.uniform(-1.0, 1.0);
  for (auto& c : costs) c = rng.uniform(-0.05, 0.0);

  std::vector<const Backend*> backends{&scalar_backend()};
  if (const Backend* avx2 = avx2_backend()) backends.push_back(avx2);

  std::printf("slice: %d nodes (%dx%dx%d), %d actions, %d reps, best of %d\n\n", m,
              nh, nd, ni, na, reps, trials);
  std::printf("%-8s %16s %16s\n", "kernel", "bellman ns/node", "combine ns/node");

  double scalar_bellman = 0.0, scalar_combine = 0.0;
  for (const Backend* b : backends) {
    BellmanArgs args = inputs.args(nd, ni);
    const double bellman_s = best_of(trials, [&] {
      for (int r = 0; r < reps; ++r) b->bellman_slice(args, 0, m);
    });
    const double combine_s = best_of(trials, [&] {
      for (int r = 0; r < reps; ++r) {
        b->max_combine(e.data(), costs.data(), na, na, m, v_out.data());
      }
    });
    const double bellman_ns = bellman_s / reps / m * 1e9;
    const double combine_ns = combine_s / reps / (static_cast<double>(m) * na) * 1e9;
    std::printf("%-8s %16.2f %16.2f", b->name, bellman_ns, combine_ns);
    if (std::strcmp(b->name, "scalar") == 0) {
      scalar_bellman = bellman_ns;
      scalar_combine = combine_ns;
      std::printf("\n");
    } else {
      std::printf("   (%.2fx, %.2fx)\n", scalar_bellman / bellman_ns,
                  scalar_combine / combine_ns);
    }
  }
  return 0;
}
