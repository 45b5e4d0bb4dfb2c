#include <immintrin.h>

#include "kernels.hpp"

namespace vchunk::kernels {
namespace {

struct Lanes {
  static constexpr std::size_t width = 16;
  using vec = __m128i;

  static vec load(const std::uint8_t* p) { return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p)); }
  static vec splat(std::uint8_t b) { return _mm_set1_epi8(static_cast<char>(b)); }
  static vec max(vec a, vec b) { return _mm_max_epu8(a, b); }
  static vec min(vec a, vec b) { return _mm_min_epu8(a, b); }
  static void store(std::uint8_t* out, vec v) { _mm_storeu_si128(reinterpret_cast<__m128i*>(out), v); }
  static std::uint64_t movemask(vec v) { return static_cast<std::uint32_t>(_mm_movemask_epi8(v)); }
  static std::uint64_t eq_mask(vec a, vec b) { return movemask(_mm_cmpeq_epi8(a, b)); }
  // No unsigned byte compares in SSE2: a >= b <=> max(a, b) == a.
  static std::uint64_t ge_mask(vec a, vec b) { return movemask(_mm_cmpeq_epi8(_mm_max_epu8(a, b), a)); }
  static std::uint64_t le_mask(vec a, vec b) { return movemask(_mm_cmpeq_epi8(_mm_min_epu8(a, b), a)); }
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

const KernelTable sse2_kernels{&extreme, &scan};

}  // namespace vchunk::kernels
