#pragma once

#include "daa/kernels.hpp"

// Shared per-element reference math. Both kernel translation units are built
// with -ffp-contract=off; the AVX2 kernel mirrors this exact operation order
// lane-wise so scalar and vector outputs are bit-identical.

namespace daa::kernels::detail {

inline double trilinear(const double* v, int hl, int hh, double whd00,
                        double whd01, double whd10, double whd11, int dl, int dh,
                        int il, int ih, double iw) {
  const double wi0 = 1.0 - iw;
  const double wi1 = iw;
  double acc = 0.0;
  acc += (whd00 * wi0) * v[hl + dl + il];
  acc += (whd00 * wi1) * v[hl + dl + ih];
  acc += (whd01 * wi0) * v[hl + dh + il];
  acc += (whd01 * wi1) * v[hl + dh + ih];
  acc += (whd10 * wi0) * v[hh + dl + il];
  acc += (whd10 * wi1) * v[hh + dl + ih];
  acc += (whd11 * wi0) * v[hh + dh + il];
  acc += (whd11 * wi1) * v[hh + dh + ih];
  return acc;
}

inline double bellman_one(const BellmanArgs& a, int j) {
  const int hl = a.h_lo[j] * a.stride_h;
  const int hh = a.h_hi[j] * a.stride_h;
  const double hw = a.h_w[j];
  const int dl = a.d_lo[j] * a.stride_d;
  const int dh = a.d_hi[j] * a.stride_d;
  const double dw = a.d_w[j];
  const double whd00 = (1.0 - hw) * (1.0 - dw);
  const double whd01 = (1.0 - hw) * dw;
  const double whd10 = hw * (1.0 - dw);
  const double whd11 = hw * dw;

  const double acc0 = trilinear(a.v_prev, hl, hh, whd00, whd01, whd10, whd11, dl,
                                dh, a.i_lo0[j], a.i_hi0[j], a.i_w0[j]);
  const double acc1 = trilinear(a.v_prev, hl, hh, whd00, whd01, whd10, whd11, dl,
                                dh, a.i_lo1[j], a.i_hi1[j], a.i_w1[j]);
  const double acc2 = trilinear(a.v_prev, hl, hh, whd00, whd01, whd10, whd11, dl,
                                dh, a.i_lo2[j], a.i_hi2[j], a.i_w2[j]);
  double total = a.p0 * acc0;
  total = total + a.p1 * acc1;
  total = total + a.p2 * acc2;
  return a.gamma * total;
}

inline double combine_one(const double* e, const double* costs, int n_actions,
                          int m, int prev, int j) {
  const double* cost_row = costs + static_cast<std::size_t>(prev) * n_actions;
  double acc = cost_row[0] + e[j];
  for (int act = 1; act < n_actions; ++act) {
    const double cand = cost_row[act] + e[static_cast<std::size_t>(act) * m + j];
    acc = cand > acc ? cand : acc;
  }
  return acc;
}

}  // namespace daa::kernels::detail
