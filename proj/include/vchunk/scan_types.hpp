#pragma once

#include <cstdint>

namespace vchunk {

/// Byte-versus-target predicate applied by a range scan.
enum class Comparator : std::uint8_t { gt, geq, lt, leq, eq };

enum class ExtremeMode : std::uint8_t { max, min };

}  // namespace vchunk
