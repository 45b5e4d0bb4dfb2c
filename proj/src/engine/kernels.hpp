#pragma once

// Per-engine kernel entry points. Each engine lives in its own translation unit
// compiled with that engine's instruction-set flags, so this header stays free
// of anything that could be instantiated with the wrong target attributes.

#include <cstddef>
#include <cstdint>

#include "vchunk/scan_types.hpp"

namespace vchunk::kernels {

/// Returns the extreme byte value; stores its leftmost offset in *position.
/// `len` is never zero.
using ExtremeFn = std::uint8_t (*)(const std::uint8_t* data, std::size_t len, ExtremeMode mode,
                                   std::size_t* position);

/// Returns the offset of the first matching byte, or `len` when none match.
using ScanFn = std::size_t (*)(const std::uint8_t* data, std::size_t len, std::uint8_t target,
                               Comparator cmp);

struct KernelTable {
  ExtremeFn extreme;
  ScanFn scan;
};

extern const KernelTable scalar_kernels;
extern const KernelTable generic128_kernels;  // emulated mask extraction

#if defined(__x86_64__) || defined(__i386__)
#define VCHUNK_X86_KERNELS 1
extern const KernelTable sse2_kernels;
extern const KernelTable avx2_kernels;
extern const KernelTable avx512_kernels;
#endif

std::uint16_t generic128_mask_extract(const std::uint8_t* lanes);

}  // namespace vchunk::kernels

namespace vchunk {
struct EngineDescriptor;
}

namespace vchunk::kernels {
/// Kernel table backing `engine`; throws EngineUnavailableError when the
/// engine was not compiled into this build.
const KernelTable& table_for(const EngineDescriptor& engine);
}  // namespace vchunk::kernels
