#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vchunk/engine.hpp"

namespace vchunk {

enum class Algorithm : std::uint8_t { fixed, rabin, gear, fastcdc, ae_min, ae_max, maxp, ram };

/// CLI vocabulary: fixed, rabin, gear, fastcdc, ae-min, ae-max, maxp, ram.
std::string_view to_string(Algorithm algo) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;
std::vector<Algorithm> all_algorithms();
std::vector<Algorithm> hashless_algorithms();
bool is_hashless(Algorithm algo) noexcept;

struct ChunkerConfig {
  Algorithm algorithm = Algorithm::ram;
  std::size_t target_avg_size = 8192;
  std::size_t window = 8191;       // AE / RAM fixed window
  std::size_t half_window = 2048;  // MAXP bytes on each side of a candidate
  std::size_t min_size = 2048;     // hash-based only
  std::size_t max_size = 32768;
  unsigned mask_bits = 13;         // hash-based boundary test
  EngineDescriptor engine = scalar_engine();

  /// Parameters derived from the target: window = target - 1,
  /// half_window = round(target / 4), min = target / 4, max = 4 * target,
  /// mask_bits = floor(log2(target)).
  static ChunkerConfig defaults(Algorithm algo, std::size_t target, EngineDescriptor engine = scalar_engine());

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  /// Smallest possible distance between consecutive content boundaries.
  std::size_t min_chunk_distance() const noexcept;

  /// Bytes past a chunk's start that can influence where that chunk ends.
  std::size_t lookahead() const noexcept;
};

enum class BoundaryReason : std::uint8_t { content, max_size_cap, end_of_stream };

std::string_view to_string(BoundaryReason reason) noexcept;
std::optional<BoundaryReason> parse_boundary_reason(std::string_view name) noexcept;

/// Inclusive offset of a chunk's last byte.
struct Boundary {
  std::uint64_t offset = 0;
  BoundaryReason reason = BoundaryReason::content;

  friend bool operator==(const Boundary&, const Boundary&) = default;
};

enum class ScanPattern : std::uint8_t { extreme_byte_search, range_scan };

/// Bytes consumed by each of the two accelerated patterns. A byte is charged
/// to whichever pattern examined it first, so over a whole stream
/// bytes_ebs + bytes_rs equals the number of bytes scanned.
class PatternCounters {
 public:
  std::uint64_t bytes_ebs = 0;
  std::uint64_t bytes_rs = 0;

  std::uint64_t total() const noexcept { return bytes_ebs + bytes_rs; }

  /// Charge [begin, end) (positions in the caller's current buffer).
  void attribute(ScanPattern pattern, std::size_t begin, std::size_t end) noexcept {
    if (begin < frontier_) begin = frontier_;
    if (end <= begin) return;
    (pattern == ScanPattern::extreme_byte_search ? bytes_ebs : bytes_rs) += end - begin;
    frontier_ = end;
  }

  /// Forget scan progress before a new, unrelated stream; totals are kept.
  void restart() noexcept { frontier_ = 0; }

  /// The caller's buffer dropped `shift` leading bytes.
  void rebase(std::size_t shift) noexcept { frontier_ = frontier_ > shift ? frontier_ - shift : 0; }

  PatternCounters& operator+=(const PatternCounters& other) noexcept {
    bytes_ebs += other.bytes_ebs;
    bytes_rs += other.bytes_rs;
    return *this;
  }

 private:
  std::size_t frontier_ = 0;
};

// Per-algorithm boundary search. `data` ends where the stream ends (or holds at
// least start + cfg.lookahead() bytes); `start` is the first byte of the chunk.
// Returned offsets are positions within `data`.

Boundary ram_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters);
Boundary ae_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, ExtremeMode mode,
                          PatternCounters& counters);
Boundary maxp_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters);
Boundary fixed_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg);
Boundary rabin_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg);
Boundary gear_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg);
Boundary fastcdc_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg);

/// Dispatches on cfg.algorithm.
Boundary next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters);

/// Chunks an in-memory stream end to end.
std::vector<Boundary> chunk_buffer(ByteSpan data, const ChunkerConfig& cfg, PatternCounters* counters = nullptr);

/// Fixed seed of the Gear table; every build produces the same boundaries.
inline constexpr std::uint64_t kGearSeed = 0x7663686B67656172ULL;  // "vchkgear"

/// 256 pseudorandom 64-bit values drawn from std::mt19937_64(kGearSeed).
const std::uint64_t* gear_table() noexcept;

/// Gear boundary mask with the `bits` most significant bits set.
std::uint64_t gear_mask(unsigned bits) noexcept;

/// Rabin fingerprinting over GF(2): irreducible polynomial of degree 63 and a
/// 48-byte sliding window. The window restarts at every chunk start.
inline constexpr std::uint64_t kRabinPolynomial = 0xbfe6b8a5bf378d83ULL;
inline constexpr std::size_t kRabinWindow = 48;

class RabinWindow {
 public:
  RabinWindow() noexcept;

  void reset() noexcept;
  /// Shifts `in` into the window and returns the new fingerprint.
  std::uint64_t slide(std::uint8_t in) noexcept;
  std::uint64_t fingerprint() const noexcept { return fp_; }

 private:
  std::uint64_t fp_ = 0;
  std::uint8_t ring_[kRabinWindow] = {};
  std::size_t pos_ = 0;
};

}  // namespace vchunk
