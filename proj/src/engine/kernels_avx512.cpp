#include <immintrin.h>

#include "kernels.hpp"

namespace vchunk::kernels {
namespace {

// AVX-512BW compares write straight into a 64-bit mask register.
struct Lanes {
  static constexpr std::size_t width = 64;
  using vec = __m512i;

  static vec load(const std::uint8_t* p) { return _mm512_loadu_si512(p); }
  static vec splat(std::uint8_t b) { return _mm512_set1_epi8(static_cast<char>(b)); }
  static vec max(vec a, vec b) { return _mm512_max_epu8(a, b); }
  static vec min(vec a, vec b) { return _mm512_min_epu8(a, b); }
  static void store(std::uint8_t* out, vec v) { _mm512_storeu_si512(out, v); }
  static std::uint64_t eq_mask(vec a, vec b) { return _mm512_cmpeq_epu8_mask(a, b); }
  static std::uint64_t ge_mask(vec a, vec b) { return _mm512_cmpge_epu8_mask(a, b); }
  static std::uint64_t le_mask(vec a, vec b) { return _mm512_cmple_epu8_mask(a, b); }
};

}  // namespace

#include "simd_kernels.inl"

namespace {
std::uint8_t extreme(const std::uint8_t* d, std::size_t n, ExtremeMode m, std::size_t* p) {
  return lane_extreme_dispatch<Lanes>(d, n, m, p);
}
std::size_t scan(const std::uint8_t* d, std::size_t n, std::uint8_t t, Comparator c) {
  return lane_scan<Lanes>(d, n, t, c);
}
}  // namespace

const KernelTable avx512_kernels{&extreme, &scan};

}  // namespace vchunk::kernels
