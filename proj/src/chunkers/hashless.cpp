// RAM, AE and MAXP expressed as Extreme Byte Searches and Range Scans over the
// selected engine. The scalar engine runs the same composition with
// byte-at-a-time kernels and is the reference the vector engines must match.

#include <algorithm>

#include "../engine/kernels.hpp"
#include "chunk_common.hpp"
#include "vchunk/chunker.hpp"

namespace vchunk {
namespace {

using kernels::KernelTable;

struct Scan {
  const KernelTable& k;
  const std::uint8_t* d;
  PatternCounters& counters;

  /// Extreme over [begin, end); absolute position of the leftmost hit.
  ExtremeByte extreme(std::size_t begin, std::size_t end, ExtremeMode mode) {
    ExtremeByte out;
    out.value = k.extreme(d + begin, end - begin, mode, &out.position);
    out.position += begin;
    counters.attribute(ScanPattern::extreme_byte_search, begin, end);
    return out;
  }

  /// First match in [begin, end), or `end`.
  std::size_t find(std::size_t begin, std::size_t end, std::uint8_t target, Comparator cmp) {
    if (end <= begin) return end;
    const std::size_t at = begin + k.scan(d + begin, end - begin, target, cmp);
    counters.attribute(ScanPattern::range_scan, begin, at < end ? at + 1 : end);
    return at;
  }

  void touch(std::size_t begin, std::size_t end, ScanPattern pattern) { counters.attribute(pattern, begin, end); }
};

}  // namespace

Boundary ram_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters) {
  Scan scan{kernels::table_for(cfg.engine), data.data(), counters};
  const std::size_t n = data.size();
  const std::size_t limit = std::min(n, start + cfg.max_size);
  const std::size_t window_end = start + cfg.window;

  if (window_end >= limit) {
    scan.touch(start, std::min(window_end, limit), ScanPattern::extreme_byte_search);
    return detail::size_limited_boundary(n, start, cfg, counters);
  }
  const std::uint8_t window_max = scan.extreme(start, window_end, ExtremeMode::max).value;
  const std::size_t hit = scan.find(window_end, limit, window_max, Comparator::geq);
  if (hit < limit) return {hit, BoundaryReason::content};
  return detail::size_limited_boundary(n, start, cfg, counters);
}

// The candidate is the latest byte at least as extreme as every earlier byte of
// the chunk. A boundary lands `window` bytes after the first candidate that is
// strictly more extreme than all of those following bytes. `known` tracks how
// far past the candidate that has already been established.
Boundary ae_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, ExtremeMode mode,
                          PatternCounters& counters) {
  Scan scan{kernels::table_for(cfg.engine), data.data(), counters};
  const std::uint8_t* d = data.data();
  const std::size_t n = data.size();
  const std::size_t limit = std::min(n, start + cfg.max_size);
  const bool is_max = mode == ExtremeMode::max;
  const Comparator rivals = is_max ? Comparator::geq : Comparator::leq;
  const auto beats = [is_max](std::uint8_t a, std::uint8_t b) { return is_max ? a > b : a < b; };

  scan.touch(start, start + 1, ScanPattern::range_scan);
  std::size_t cand = start;
  std::size_t known = start;
  for (;;) {
    const std::size_t window_last = cand + cfg.window;
    const std::size_t hi = std::min(window_last, limit - 1);
    if (known == cand) {
      if (hi > cand) {
        const ExtremeByte ext = scan.extreme(cand + 1, hi + 1, mode);
        if (!beats(d[cand], ext.value)) {
          // Earlier ties cannot survive their own window; jump to the last one.
          std::size_t last = ext.position;
          for (std::size_t q; (q = scan.find(last + 1, hi + 1, ext.value, Comparator::eq)) <= hi;) last = q;
          cand = last;
          known = hi;
          continue;
        }
        known = hi;
      }
    } else if (hi > known) {
      const std::size_t hit = scan.find(known + 1, hi + 1, d[cand], rivals);
      if (hit <= hi) {
        cand = hit;
        known = hit;
        continue;
      }
      known = hi;
    }
    if (known == window_last) return {window_last, BoundaryReason::content};
    return detail::size_limited_boundary(n, start, cfg, counters);
  }
}

// A boundary is the first position c >= start + h whose byte is strictly
// greater than the h bytes on each side. Candidates come from Range Scans
// (GT); each is confirmed by Extreme Byte Searches over its two windows.
Boundary maxp_next_boundary(ByteSpan data, std::size_t start, const ChunkerConfig& cfg, PatternCounters& counters) {
  Scan scan{kernels::table_for(cfg.engine), data.data(), counters};
  const std::uint8_t* d = data.data();
  const std::size_t n = data.size();
  const std::size_t h = cfg.half_window;
  const std::size_t cand_limit = std::min(n, start + cfg.max_size);

  std::size_t c = start + h;
  bool left_ok = false;  // [c - h, c) known to be strictly below d[c]
  for (;;) {
    if (c >= cand_limit || c + h >= n) return detail::size_limited_boundary(n, start, cfg, counters);

    if (!left_ok) {
      const ExtremeByte left = scan.extreme(c - h, c, ExtremeMode::max);
      if (d[c] > left.value) {
        left_ok = true;
      } else {
        // Every position up to left.position + h sees that byte on its left.
        const std::size_t hi = std::min(left.position + h, cand_limit - 1);
        scan.touch(c, c + 1, ScanPattern::range_scan);
        const std::size_t hit = scan.find(c + 1, hi + 1, left.value, Comparator::gt);
        if (hit <= hi) {
          c = hit;
          left_ok = true;
        } else {
          c = left.position + h + 1;
        }
        continue;
      }
    }

    scan.touch(c, c + 1, ScanPattern::range_scan);
    const ExtremeByte right = scan.extreme(c + 1, c + h + 1, ExtremeMode::max);
    if (d[c] > right.value) return {c, BoundaryReason::content};
    if (d[c] < right.value) {
      c = right.position;  // its left side is dominated by construction
      left_ok = true;
      continue;
    }
    // Tie: right.position sees d[c] on its left, so look for something larger.
    const std::size_t hi = std::min(c + h, cand_limit - 1);
    const std::size_t hit = scan.find(right.position + 1, hi + 1, right.value, Comparator::gt);
    if (hit <= hi) {
      c = hit;
      left_ok = true;
    } else {
      c = c + h + 1;
      left_ok = false;
    }
  }
}

}  // namespace vchunk
