#pragma once

#include <algorithm>

#include "vchunk/chunker.hpp"

namespace vchunk::detail {

/// No content boundary before the size limit: cap at max_size when the data
/// reaches that far, otherwise end the stream. Unscanned chunk bytes are
/// charged to the range scan that ran out.
inline Boundary size_limited_boundary(std::size_t n, std::size_t start, const ChunkerConfig& cfg,
                                      PatternCounters& counters) {
  if (start + cfg.max_size <= n) {
    const std::size_t last = start + cfg.max_size - 1;
    counters.attribute(ScanPattern::range_scan, start, last + 1);
    return {last, BoundaryReason::max_size_cap};
  }
  counters.attribute(ScanPattern::range_scan, start, n);
  return {n - 1, BoundaryReason::end_of_stream};
}

/// Same limit rule for algorithms that keep no pattern counters.
inline Boundary size_limited_boundary(std::size_t n, std::size_t start, const ChunkerConfig& cfg) {
  if (start + cfg.max_size <= n) return {start + cfg.max_size - 1, BoundaryReason::max_size_cap};
  return {n - 1, BoundaryReason::end_of_stream};
}

}  // namespace vchunk::detail
