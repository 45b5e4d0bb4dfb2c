#include "vchunk/fingerprint.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace vchunk {
namespace {

std::uint64_t load64(const std::uint8_t* p) noexcept {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  return v;
}

constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

constexpr std::uint64_t kC1 = 0x87c37b91114253d5ULL;
constexpr std::uint64_t kC2 = 0x4cf5ad432745937fULL;

}  // namespace

Fingerprint murmur3_x64_128(ByteSpan data, std::uint32_t seed) noexcept {
  const std::uint8_t* p = data.data();
  const std::size_t len = data.size();
  const std::size_t nblocks = len / 16;
  std::uint64_t h1 = seed;
  std::uint64_t h2 = seed;

  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint64_t k1 = load64(p + 16 * i);
    std::uint64_t k2 = load64(p + 16 * i + 8);

    k1 *= kC1;
    k1 = std::rotl(k1, 31);
    k1 *= kC2;
    h1 ^= k1;
    h1 = std::rotl(h1, 27);
    h1 += h2;
    h1 = h1 * 5 + 0x52dce729;

    k2 *= kC2;
    k2 = std::rotl(k2, 33);
    k2 *= kC1;
    h2 ^= k2;
    h2 = std::rotl(h2, 31);
    h2 += h1;
    h2 = h2 * 5 + 0x38495ab5;
  }

  const std::uint8_t* tail = p + nblocks * 16;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  const std::size_t rem = len & 15;
  for (std::size_t i = rem; i > 8; --i) k2 ^= std::uint64_t{tail[i - 1]} << (8 * (i - 9));
  if (rem > 8) {
    k2 *= kC2;
    k2 = std::rotl(k2, 33);
    k2 *= kC1;
    h2 ^= k2;
  }
  for (std::size_t i = std::min<std::size_t>(rem, 8); i > 0; --i) k1 ^= std::uint64_t{tail[i - 1]} << (8 * (i - 1));
  if (rem > 0) {
    k1 *= kC1;
    k1 = std::rotl(k1, 31);
    k1 *= kC2;
    h1 ^= k1;
  }

  h1 ^= len;
  h2 ^= len;
  h1 += h2;
  h2 += h1;
  h1 = fmix64(h1);
  h2 = fmix64(h2);
  h1 += h2;
  h2 += h1;
  return {h1, h2};
}

Fingerprint fingerprint_chunk(ByteSpan chunk) {
  if (chunk.empty()) throw std::invalid_argument("cannot fingerprint an empty chunk");
  return murmur3_x64_128(chunk, kFingerprintSeed);
}

std::string Fingerprint::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int half = 0; half < 2; ++half) {
    const std::uint64_t v = half == 0 ? h1 : h2;
    for (int b = 0; b < 8; ++b) {
      const auto byte = static_cast<std::uint8_t>(v >> (8 * b));
      out[half * 16 + b * 2] = kDigits[byte >> 4];
      out[half * 16 + b * 2 + 1] = kDigits[byte & 15];
    }
  }
  return out;
}

std::optional<Fingerprint> Fingerprint::from_hex(std::string_view text) {
  if (text.size() != 32) return std::nullopt;
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  Fingerprint f;
  for (int half = 0; half < 2; ++half) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      const int hi = nibble(text[half * 16 + b * 2]);
      const int lo = nibble(text[half * 16 + b * 2 + 1]);
      if (hi < 0 || lo < 0) return std::nullopt;
      v |= std::uint64_t(hi << 4 | lo) << (8 * b);
    }
    (half == 0 ? f.h1 : f.h2) = v;
  }
  return f;
}

}  // namespace vchunk
