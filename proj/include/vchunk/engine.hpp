#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vchunk/scan_types.hpp"

namespace vchunk {

using ByteSpan = std::span<const std::uint8_t>;

enum class EngineId : std::uint8_t { scalar, v128, v256, v512 };

/// Identifies one lane-parallel byte-processing backend.
///
/// Engines are plain values; they hold no state, so the same descriptor can be
/// used concurrently from any number of threads.
struct EngineDescriptor {
  EngineId id = EngineId::scalar;
  unsigned lane_width_bytes = 1;
  bool has_native_mask_extract = true;

  std::string_view name() const noexcept;

  friend bool operator==(const EngineDescriptor&, const EngineDescriptor&) = default;
};

struct ExtremeByte {
  std::uint8_t value = 0;
  std::size_t position = 0;

  friend bool operator==(const ExtremeByte&, const ExtremeByte&) = default;
};

/// Engine names accepted on the command line, widest first.
inline constexpr std::string_view kEngineNames[] = {"v512", "v256", "v128", "scalar"};

EngineDescriptor scalar_engine() noexcept;

/// Engines usable on this host, widest first; "scalar" is always last.
std::vector<EngineDescriptor> detect_engines();

/// Resolves "auto" or an engine name against the host.
/// Throws UsageError for unknown names and EngineUnavailableError when the
/// host lacks the required instruction set.
EngineDescriptor select_engine(std::string_view name);

/// The 128-bit engine forced onto the portable mask-extraction emulation
/// (narrowing shift instead of a native movemask). Always constructible.
EngineDescriptor emulated_mask_engine() noexcept;

std::string_view to_string(Comparator cmp) noexcept;
std::string_view to_string(ExtremeMode mode) noexcept;

/// Maximum or minimum byte of `region` and the offset of its leftmost
/// occurrence. Throws std::invalid_argument("empty region") for an empty span.
ExtremeByte extreme_byte_search(const EngineDescriptor& engine, ByteSpan region, ExtremeMode mode);

/// Offset of the first byte b in `region` with (b cmp target), if any.
std::optional<std::size_t> range_scan(const EngineDescriptor& engine, ByteSpan region,
                                      std::uint8_t target, Comparator cmp);

/// Lowest set lane of a comparison mask with `width` meaningful bits.
std::optional<unsigned> mask_first_index(std::uint64_t mask, unsigned width) noexcept;

/// Collapses 16 per-lane comparison results (0x00 or 0xFF) into a 16-bit lane
/// mask using the narrowing-shift emulation that engines without a native
/// mask-extract instruction rely on.
std::uint16_t emulated_mask_extract(std::span<const std::uint8_t, 16> lanes) noexcept;

}  // namespace vchunk
