// 128-bit engine written with compiler vector extensions. It lowers to NEON,
// VSX or SSE depending on the target, and never relies on a native
// mask-extract instruction: lane masks come from a narrowing shift (each
// 16-bit pair shifted right by four and truncated to a byte, leaving one
// nibble per lane) followed by a bit compaction.

#include <cstring>

#include "kernels.hpp"

namespace vchunk::kernels {
namespace {

typedef std::uint8_t u8x16 __attribute__((vector_size(16)));
typedef std::uint16_t u16x8 __attribute__((vector_size(16)));
typedef std::uint8_t u8x8 __attribute__((vector_size(8)));

static_assert(__BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__, "nibble mask layout assumes little-endian lanes");

// Nibble i of the result is 0xF when lane i is set.
inline std::uint64_t narrow_shift(u8x16 lanes) {
  u16x8 pairs;
  std::memcpy(&pairs, &lanes, sizeof pairs);
  const u8x8 narrowed = __builtin_convertvector(pairs >> 4, u8x8);
  std::uint64_t nibbles;
  std::memcpy(&nibbles, &narrowed, sizeof nibbles);
  return nibbles;
}

// Gathers bit 4i into bit i.
inline std::uint64_t compact_nibbles(std::uint64_t x) {
  x &= 0x1111111111111111ULL;
  x = (x | (x >> 3)) & 0x0303030303030303ULL;
  x = (x | (x >> 6)) & 0x000F000F000F000FULL;
  x = (x | (x >> 12)) & 0x000000FF000000FFULL;
  x = (x | (x >> 24)) & 0x000000000000FFFFULL;
  return x;
}

inline std::uint64_t lane_mask(u8x16 cmp_result) { return compact_nibbles(narrow_shift(cmp_result)); }

struct Lanes {
  static constexpr std::size_t width = 16;
  using vec = u8x16;

  static vec load(const std::uint8_t* p) {
    vec v;
    std::memcpy(&v, p, sizeof v);
    return v;
  }
  static vec splat(std::uint8_t b) { return vec{} + b; }
  static vec max(vec a, vec b) { return a > b ? a : b; }
  static vec min(vec a, vec b) { return a < b ? a : b; }
  static void store(std::uint8_t* out, vec v) { std::memcpy(out, &v, sizeof v); }
  static std::uint64_t eq_mask(vec a, vec b) { return lane_mask(reinterpret_cast<vec>(a == b)); }
  static std::uint64_t ge_mask(vec a, vec b) { return lane_mask(reinterpret_cast<vec>(a >= b)); }
  static std::uint64_t le_mask(vec a, vec b) { return lane_mask(reinterpret_cast<vec>(a <= b)); }
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

const KernelTable generic128_kernels{&extreme, &scan};

std::uint16_t generic128_mask_extract(const std::uint8_t* lanes) {
  return static_cast<std::uint16_t>(lane_mask(Lanes::load(lanes)));
}

}  // namespace vchunk::kernels
