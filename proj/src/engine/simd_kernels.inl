// Shared lane-parallel kernel bodies. Included by each engine translation unit
// after it defines a `Lanes` traits type:
//
//   static constexpr std::size_t width;
//   using vec;
//   static vec load(const std::uint8_t*);
//   static vec splat(std::uint8_t);
//   static vec max(vec, vec), min(vec, vec);
//   static void store(std::uint8_t*, vec);
//   static std::uint64_t eq_mask(vec, vec);   // bit i set iff lane i equal
//   static std::uint64_t ge_mask(vec, vec);   // unsigned a >= b
//   static std::uint64_t le_mask(vec, vec);   // unsigned a <= b
//
// Everything here has internal linkage; only builtins are used so nothing gets
// emitted as a shared inline symbol carrying this unit's target flags.

namespace {

inline unsigned lowest_lane(std::uint64_t mask) { return static_cast<unsigned>(__builtin_ctzll(mask)); }

template <class Lanes, class MaskOf, class Pred>
std::size_t scan_blocks(const std::uint8_t* data, std::size_t len, typename Lanes::vec target, MaskOf mask_of,
                        Pred pred) {
  constexpr std::size_t w = Lanes::width;
  std::size_t i = 0;
  for (; i + 4 * w <= len; i += 4 * w) {
    const std::uint64_t m0 = mask_of(Lanes::load(data + i), target);
    const std::uint64_t m1 = mask_of(Lanes::load(data + i + w), target);
    const std::uint64_t m2 = mask_of(Lanes::load(data + i + 2 * w), target);
    const std::uint64_t m3 = mask_of(Lanes::load(data + i + 3 * w), target);
    if ((m0 | m1 | m2 | m3) != 0) {
      if (m0 != 0) return i + lowest_lane(m0);
      if (m1 != 0) return i + w + lowest_lane(m1);
      if (m2 != 0) return i + 2 * w + lowest_lane(m2);
      return i + 3 * w + lowest_lane(m3);
    }
  }
  for (; i + w <= len; i += w) {
    const std::uint64_t m = mask_of(Lanes::load(data + i), target);
    if (m != 0) return i + lowest_lane(m);
  }
  // Scalar tail: never read past the region.
  for (; i < len; ++i) {
    if (pred(data[i])) return i;
  }
  return len;
}

template <class Lanes>
std::size_t lane_scan(const std::uint8_t* data, std::size_t len, std::uint8_t target, Comparator cmp) {
  switch (cmp) {
    case Comparator::gt:
      if (target == 0xFF) return len;
      return scan_blocks<Lanes>(
          data, len, Lanes::splat(static_cast<std::uint8_t>(target + 1)),
          [](typename Lanes::vec v, typename Lanes::vec t) { return Lanes::ge_mask(v, t); },
          [target](std::uint8_t b) { return b > target; });
    case Comparator::geq:
      return scan_blocks<Lanes>(
          data, len, Lanes::splat(target),
          [](typename Lanes::vec v, typename Lanes::vec t) { return Lanes::ge_mask(v, t); },
          [target](std::uint8_t b) { return b >= target; });
    case Comparator::lt:
      if (target == 0) return len;
      return scan_blocks<Lanes>(
          data, len, Lanes::splat(static_cast<std::uint8_t>(target - 1)),
          [](typename Lanes::vec v, typename Lanes::vec t) { return Lanes::le_mask(v, t); },
          [target](std::uint8_t b) { return b < target; });
    case Comparator::leq:
      return scan_blocks<Lanes>(
          data, len, Lanes::splat(target),
          [](typename Lanes::vec v, typename Lanes::vec t) { return Lanes::le_mask(v, t); },
          [target](std::uint8_t b) { return b <= target; });
    case Comparator::eq:
      return scan_blocks<Lanes>(
          data, len, Lanes::splat(target),
          [](typename Lanes::vec v, typename Lanes::vec t) { return Lanes::eq_mask(v, t); },
          [target](std::uint8_t b) { return b == target; });
  }
  return len;
}

// Tree reduction: groups of eight W-byte blocks are folded pairwise
// (8 -> 4 -> 2 -> 1) and the group results folded into an accumulator. The
// surviving W bytes are reduced by a sequential scan, then the leftmost
// occurrence of the winning value is located with an equality scan.
template <class Lanes, bool IsMax>
std::uint8_t lane_extreme(const std::uint8_t* data, std::size_t len, std::size_t* position) {
  using vec = typename Lanes::vec;
  constexpr std::size_t w = Lanes::width;
  const auto pick = [](vec a, vec b) { return IsMax ? Lanes::max(a, b) : Lanes::min(a, b); };
  const auto better = [](std::uint8_t a, std::uint8_t b) { return IsMax ? a > b : a < b; };

  const std::size_t vector_len = len - len % w;
  std::uint8_t best = data[0];
  if (vector_len != 0) {
    vec acc = Lanes::load(data);
    std::size_t i = w;
    for (; i + 8 * w <= vector_len; i += 8 * w) {
      const vec l01 = pick(Lanes::load(data + i), Lanes::load(data + i + w));
      const vec l23 = pick(Lanes::load(data + i + 2 * w), Lanes::load(data + i + 3 * w));
      const vec l45 = pick(Lanes::load(data + i + 4 * w), Lanes::load(data + i + 5 * w));
      const vec l67 = pick(Lanes::load(data + i + 6 * w), Lanes::load(data + i + 7 * w));
      acc = pick(acc, pick(pick(l01, l23), pick(l45, l67)));
    }
    for (; i < vector_len; i += w) acc = pick(acc, Lanes::load(data + i));

    alignas(64) std::uint8_t lanes[w];
    Lanes::store(lanes, acc);
    best = lanes[0];
    for (std::size_t k = 1; k < w; ++k) {
      if (better(lanes[k], best)) best = lanes[k];
    }
  }
  for (std::size_t i = vector_len; i < len; ++i) {
    if (better(data[i], best)) best = data[i];
  }
  *position = lane_scan<Lanes>(data, len, best, Comparator::eq);
  return best;
}

template <class Lanes>
std::uint8_t lane_extreme_dispatch(const std::uint8_t* data, std::size_t len, ExtremeMode mode,
                                   std::size_t* position) {
  return mode == ExtremeMode::max ? lane_extreme<Lanes, true>(data, len, position)
                                  : lane_extreme<Lanes, false>(data, len, position);
}

}  // namespace
