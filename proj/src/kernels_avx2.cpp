#include "daa/kernels.hpp"

#include "kernels_detail.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace daa::kernels {

namespace {

// 4 nodes per iteration. Per-lane operation order matches the scalar
// reference exactly (no FMA), so results are bit-identical.
void bellman_slice_avx2(const BellmanArgs& a, int begin, int end) {
  const __m128i stride_h = _mm_set1_epi32(a.stride_h);
  const __m128i stride_d = _mm_set1_epi32(a.stride_d);
  const __m256d ones = _mm256_set1_pd(1.0);
  const __m256d p0 = _mm256_set1_pd(a.p0);
  const __m256d p1 = _mm256_set1_pd(a.p1);
  const __m256d p2 = _mm256_set1_pd(a.p2);
  const __m256d gamma = _mm256_set1_pd(a.gamma);

  int j = begin;
  for (; j + 4 <= end; j += 4) {
    const __m128i hl = _mm_mullo_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.h_lo + j)), stride_h);
    const __m128i hh = _mm_mullo_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.h_hi + j)), stride_h);
    const __m128i dl = _mm_mullo_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.d_lo + j)), stride_d);
    const __m128i dh = _mm_mullo_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.d_hi + j)), stride_d);

    const __m128i b00 = _mm_add_epi32(hl, dl);
    const __m128i b01 = _mm_add_epi32(hl, dh);
    const __m128i b10 = _mm_add_epi32(hh, dl);
    const __m128i b11 = _mm_add_epi32(hh, dh);

    const __m256d hw = _mm256_loadu_pd(a.h_w + j);
    const __m256d dw = _mm256_loadu_pd(a.d_w + j);
    const __m256d hw0 = _mm256_sub_pd(ones, hw);
    const __m256d dw0 = _mm256_sub_pd(ones, dw);
    const __m256d whd00 = _mm256_mul_pd(hw0, dw0);
    const __m256d whd01 = _mm256_mul_pd(hw0, dw);
    const __m256d whd10 = _mm256_mul_pd(hw, dw0);
    const __m256d whd11 = _mm256_mul_pd(hw, dw);

    auto trilinear = [&](const std::int32_t* i_lo, const std::int32_t* i_hi,
                         const double* i_w) {
      const __m128i il =
          _mm_loadu_si128(reinterpret_cast<const __m128i*>(i_lo + j));
      const __m128i ih =
          _mm_loadu_si128(reinterpret_cast<const __m128i*>(i_hi + j));
      const __m256d wi1 = _mm256_loadu_pd(i_w + j);
      const __m256d wi0 = _mm256_sub_pd(ones, wi1);
      __m256d acc = _mm256_setzero_pd();
      auto corner = [&](__m256d whd, __m256d wi, __m128i base, __m128i ii) {
        const __m256d v =
            _mm256_i32gather_pd(a.v_prev, _mm_add_epi32(base, ii), 8);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(whd, wi), v));
      };
      corner(whd00, wi0, b00, il);
      corner(whd00, wi1, b00, ih);
      corner(whd01, wi0, b01, il);
      corner(whd01, wi1, b01, ih);
      corner(whd10, wi0, b10, il);
      corner(whd10, wi1, b10, ih);
      corner(whd11, wi0, b11, il);
      corner(whd11, wi1, b11, ih);
      return acc;
    };

    const __m256d acc0 = trilinear(a.i_lo0, a.i_hi0, a.i_w0);
    const __m256d acc1 = trilinear(a.i_lo1, a.i_hi1, a.i_w1);
    const __m256d acc2 = trilinear(a.i_lo2, a.i_hi2, a.i_w2);
    __m256d total = _mm256_mul_pd(p0, acc0);
    total = _mm256_add_pd(total, _mm256_mul_pd(p1, acc1));
    total = _mm256_add_pd(total, _mm256_mul_pd(p2, acc2));
    _mm256_storeu_pd(a.e_out + j, _mm256_mul_pd(gamma, total));
  }
  for (; j < end; ++j) {
    a.e_out[j] = detail::bellman_one(a, j);
  }
}

void max_combine_avx2(const double* e, const double* costs, int n_actions,
                      int n_prev, int m, double* v_out) {
  for (int prev = 0; prev < n_prev; ++prev) {
    const double* cost_row = costs + static_cast<std::size_t>(prev) * n_actions;
    double* out_row = v_out + static_cast<std::size_t>(prev) * m;
    int j = 0;
    for (; j + 4 <= m; j += 4) {
      __m256d acc =
          _mm256_add_pd(_mm256_set1_pd(cost_row[0]), _mm256_loadu_pd(e + j));
      for (int act = 1; act < n_actions; ++act) {
        const __m256d cand =
            _mm256_add_pd(_mm256_set1_pd(cost_row[act]),
                          _mm256_loadu_pd(e + static_cast<std::size_t>(act) * m + j));
        acc = _mm256_max_pd(cand, acc);
      }
      _mm256_storeu_pd(out_row + j, acc);
    }
    for (; j < m; ++j) {
      out_row[j] = detail::combine_one(e, costs, n_actions, m, prev, j);
    }
  }
}

}  // namespace

const Backend* avx2_backend() {
  if (!cpu_has_avx2()) return nullptr;
  static const Backend backend{"avx2", bellman_slice_avx2, max_combine_avx2};
  return &backend;
}

}  // namespace daa::kernels

#else  // !__AVX2__

namespace daa::kernels {

const Backend* avx2_backend() { return nullptr; }

}  // namespace daa::kernels

#endif
