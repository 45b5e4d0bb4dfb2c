#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "vchunk/engine.hpp"

namespace vchunk {

/// Seed used for every chunk fingerprint ("vchk" in ASCII).
inline constexpr std::uint32_t kFingerprintSeed = 0x7663686BU;

/// 128-bit MurmurHash3 (x64 variant) digest of a chunk.
struct Fingerprint {
  std::uint64_t h1 = 0;
  std::uint64_t h2 = 0;

  /// 32 lowercase hex digits: h1 then h2, each in little-endian byte order.
  std::string hex() const;
  static std::optional<Fingerprint> from_hex(std::string_view text);

  /// Leading digest byte; selects the index shard and store directory.
  std::uint8_t prefix() const noexcept { return static_cast<std::uint8_t>(h1 & 0xFF); }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept { return static_cast<std::size_t>(f.h1 ^ (f.h2 * 0x9E3779B97F4A7C15ULL)); }
};

/// MurmurHash3_x64_128 with an explicit seed. Accepts empty input.
Fingerprint murmur3_x64_128(ByteSpan data, std::uint32_t seed) noexcept;

/// Chunk fingerprint. Throws std::invalid_argument for an empty chunk.
Fingerprint fingerprint_chunk(ByteSpan chunk);

}  // namespace vchunk
