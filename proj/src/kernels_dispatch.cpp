#include "daa/kernels.hpp"

#include <stdexcept>

namespace daa::kernels {

const char* simd_name(Simd s) {
  switch (s) {
    case Simd::Auto: return "auto";
    case Simd::Scalar: return "scalar";
    case Simd::Avx2: return "avx2";
  }
  return "?";
}

std::optional<Simd> parse_simd(const std::string& s) {
  if (s == "auto") return Simd::Auto;
  if (s == "scalar") return Simd::Scalar;
  if (s == "avx2") return Simd::Avx2;
  return std::nullopt;
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Backend& select_backend(Simd pref) {
  switch (pref) {
    case Simd::Scalar:
      return scalar_backend();
    case Simd::Avx2: {
      const Backend* b = avx2_backend();
      if (b == nullptr) throw std::runtime_error("avx2 kernels unavailable here");
      return *b;
    }
    case Simd::Auto:
      break;
  }
  const Backend* b = avx2_backend();
  return b != nullptr ? *b : scalar_backend();
}

}  // namespace daa::kernels
