#include <immintrin.h>

#include "kernels.hpp"

namespace vchunk::kernels {
namespace {

struct Lanes {
  static constexpr std::size_t width = 32;
  using vec = __m256i;

  static vec load(const std::uint8_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
  static vec splat(std::uint8_t b) { return _mm256_set1_epi8(static_cast<char>(b)); }
  static vec max(vec a, vec b) { return _mm256_max_epu8(a, b); }
  static vec min(vec a, vec b) { return _mm256_min_epu8(a, b); }
  static void store(std::uint8_t* out, vec v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), v); }
  static std::uint64_t movemask(vec v) { return static_cast<std::uint32_t>(_mm256_movemask_epi8(v)); }
  static std::uint64_t eq_mask(vec a, vec b) { return movemask(_mm256_cmpeq_epi8(a, b)); }
  static std::uint64_t ge_mask(vec a, vec b) { return movemask(_mm256_cmpeq_epi8(_mm256_max_epu8(a, b), a)); }
  static std::uint64_t le_mask(vec a, vec b) { return movemask(_mm256_cmpeq_epi8(_mm256_min_epu8(a, b), a)); }
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

const KernelTable avx2_kernels{&extreme, &scan};

}  // namespace vchunk::kernels
