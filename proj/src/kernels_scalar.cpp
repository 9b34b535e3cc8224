#include "daa/kernels.hpp"

#include "kernels_detail.hpp"

namespace daa::kernels {

namespace {

void bellman_slice_scalar(const BellmanArgs& a, int begin, int end) {
  for (int j = begin; j < end; ++j) {
    a.e_out[j] = detail::bellman_one(a, j);
  }
}

void max_combine_scalar(const double* e, const double* costs, int n_actions,
                        int n_prev, int m, double* v_out) {
  for (int prev = 0; prev < n_prev; ++prev) {
    double* out_row = v_out + static_cast<std::size_t>(prev) * m;
    for (int j = 0; j < m; ++j) {
      out_row[j] = detail::combine_one(e, costs, n_actions, m, prev, j);
    }
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", bellman_slice_scalar, max_combine_scalar};
  return backend;
}

}  // namespace daa::kernels
