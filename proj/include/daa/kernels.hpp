#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace daa::kernels {

// Inner loops of the value-iteration sweep. Scalar reference implementations
// and an AVX2 variant are selected at runtime; both are compiled without FP
// contraction and execute identical per-element operation sequences, so their
// outputs are bit-identical and equivalence-tested as such.

// One Bellman-expectation sweep over a tau slice at a fixed action. Arrays are
// indexed by spatial node j in [0, m); interpolation corners are precomputed
// (lo/hi index plus weight per dimension), so boundary clamping and size-1
// grids need no branches in the inner loop.
struct BellmanArgs {
  const double* v_prev;  // successor-tau value slice for prev = action; length m
  const std::int32_t* h_lo;
  const std::int32_t* h_hi;
  const double* h_w;
  const std::int32_t* d_lo;
  const std::int32_t* d_hi;
  const double* d_w;
  const std::int32_t* i_lo0;
  const std::int32_t* i_hi0;
  const double* i_w0;
  const std::int32_t* i_lo1;
  const std::int32_t* i_hi1;
  const double* i_w1;
  const std::int32_t* i_lo2;
  const std::int32_t* i_hi2;
  const double* i_w2;
  double p0 = 0.0, p1 = 1.0, p2 = 0.0;  // noise probabilities, sum 1
  double gamma = 1.0;
  std::int32_t stride_h = 0;  // node stride of +1 in the h index
  std::int32_t stride_d = 0;  // node stride of +1 in the dh_own index
  double* e_out = nullptr;    // length m
};

// e_out[j] = gamma * sum_k p_k * trilinear(v_prev at the successor of j, noise k)
using BellmanSliceFn = void (*)(const BellmanArgs&, int begin, int end);

// v_out[prev * m + j] = max over a of (costs[prev * n_actions + a] + e[a * m + j])
using MaxCombineFn = void (*)(const double* e, const double* costs, int n_actions,
                              int n_prev, int m, double* v_out);

struct Backend {
  const char* name;
  BellmanSliceFn bellman_slice;
  MaxCombineFn max_combine;
};

enum class Simd { Auto, Scalar, Avx2 };

const char* simd_name(Simd s);
std::optional<Simd> parse_simd(const std::string& s);

const Backend& scalar_backend();

// Null when the build target or the running CPU lacks AVX2.
const Backend* avx2_backend();

bool cpu_has_avx2();

// Auto picks the widest available variant; an explicit request for an
// unavailable variant throws std::runtime_error.
const Backend& select_backend(Simd pref);

}  // namespace daa::kernels
