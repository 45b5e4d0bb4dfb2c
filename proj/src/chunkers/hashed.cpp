#include <algorithm>
#include <array>
#include <random>

#include "chunk_common.hpp"
#include "vchunk/chunker.hpp"

namespace vchunk {

const std::uint64_t* gear_table() noexcept {
  static const std::array<std::uint64_t, 256> table = [] {
    std::array<std::uint64_t, 256> out{};
    std::mt19937_64 rng(kGearSeed);
    for (auto& v : out) v = rng();
    return out;
  }();
  return table.data();
}

std::uint64_t gear_mask(unsigned bits) noexcept {
  if (bits == 0) return 0;
  if (bits >= 64) return ~std::uint64_t{0};
  return ~std::uint64_t{0} << (64 - bits);
}

Boundary fixed_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg) {
  const std::size_t last = start + cfg.target_avg_size - 1;
  if (last < data.size()) return {last, BoundaryReason::content};
  return {data.size() - 1, BoundaryReason::end_of_stream};
}

// Boundary tests start once the chunk reaches min_size; the window restarts at
// each chunk start, so pre-rolling only the 48 bytes before the first test
// gives the same fingerprints as rolling from the start.
Boundary rabin_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg) {
  const std::uint8_t* d = data.data();
  const std::size_t n = data.size();
  const std::size_t limit = std::min(n, start + cfg.max_size);
  const std::size_t first_test = start + cfg.min_size - 1;
  if (first_test >= limit) return detail::size_limited_boundary(n, start, cfg);

  const std::uint64_t mask = (std::uint64_t{1} << cfg.mask_bits) - 1;
  RabinWindow window;
  std::size_t i = first_test >= start + kRabinWindow ? first_test + 1 - kRabinWindow : start;
  for (; i < first_test; ++i) window.slide(d[i]);
  for (; i < limit; ++i) {
    if ((window.slide(d[i]) & mask) == 0) return {i, BoundaryReason::content};
  }
  return detail::size_limited_boundary(n, start, cfg);
}

// Bits older than 64 bytes have shifted out of the Gear hash, so rolling can
// begin 63 bytes before the first test.
Boundary gear_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg) {
  const std::uint8_t* d = data.data();
  const std::uint64_t* gear = gear_table();
  const std::size_t n = data.size();
  const std::size_t limit = std::min(n, start + cfg.max_size);
  const std::size_t first_test = start + cfg.min_size - 1;
  if (first_test >= limit) return detail::size_limited_boundary(n, start, cfg);

  const std::uint64_t mask = gear_mask(cfg.mask_bits);
  std::uint64_t hash = 0;
  std::size_t i = first_test >= start + 63 ? first_test - 63 : start;
  for (; i < first_test; ++i) hash = (hash << 1) + gear[d[i]];
  for (; i < limit; ++i) {
    hash = (hash << 1) + gear[d[i]];
    if ((hash & mask) == 0) return {i, BoundaryReason::content};
  }
  return detail::size_limited_boundary(n, start, cfg);
}

// Sub-minimum skipping: hashing starts min_size bytes into the chunk. A strict
// mask (k + 2 bits) applies while the chunk is no longer than the target and a
// relaxed one (k - 2 bits) afterwards.
Boundary fastcdc_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg) {
  const std::uint8_t* d = data.data();
  const std::uint64_t* gear = gear_table();
  const std::size_t n = data.size();
  const std::size_t limit = std::min(n, start + cfg.max_size);
  const std::size_t first = start + cfg.min_size;
  if (first >= limit) return detail::size_limited_boundary(n, start, cfg);

  const std::uint64_t strict = gear_mask(cfg.mask_bits + 2);
  const std::uint64_t relaxed = gear_mask(cfg.mask_bits - 2);
  const std::size_t normal_end = std::min(limit, std::max(first, start + cfg.target_avg_size));
  std::uint64_t hash = 0;
  std::size_t i = first;
  for (; i < normal_end; ++i) {
    hash = (hash << 1) + gear[d[i]];
    if ((hash & strict) == 0) return {i, BoundaryReason::content};
  }
  for (; i < limit; ++i) {
    hash = (hash << 1) + gear[d[i]];
    if ((hash & relaxed) == 0) return {i, BoundaryReason::content};
  }
  return detail::size_limited_boundary(n, start, cfg);
}

Boundary next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters) {
  switch (cfg.algorithm) {
    case Algorithm::fixed: return fixed_next_boundary(data, start, cfg);
    case Algorithm::rabin: return rabin_next_boundary(data, start, cfg);
    case Algorithm::gear: return gear_next_boundary(data, start, cfg);
    case Algorithm::fastcdc: return fastcdc_next_boundary(data, start, cfg);
    case Algorithm::ae_min: return ae_next_boundary(data, start, cfg, ExtremeMode::min, counters);
    case Algorithm::ae_max: return ae_next_boundary(data, start, cfg, ExtremeMode::max, counters);
    case Algorithm::maxp: return maxp_next_boundary(data, start, cfg, counters);
    case Algorithm::ram: return ram_next_boundary(data, start, cfg, counters);
  }
  return {data.size() - 1, BoundaryReason::end_of_stream};
}

std::vector<Boundary> chunk_buffer(ByteSpan data, const ChunkerConfig& cfg, PatternCounters* counters) {
  PatternCounters local;
  PatternCounters& ctr = counters != nullptr ? *counters : local;
  ctr.restart();
  std::vector<Boundary> out;
  if (data.empty()) return out;
  out.reserve(data.size() / std::max<std::size_t>(cfg.target_avg_size, 1) + 1);
  std::size_t start = 0;
  while (start < data.size()) {
    const Boundary b = next_boundary(data, start, cfg, ctr);
    out.push_back(b);
    start = static_cast<std::size_t>(b.offset) + 1;
  }
  return out;
}

}  // namespace vchunk
