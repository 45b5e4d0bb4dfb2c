// Reference kernels: one byte per step. Built with auto-vectorization disabled
// so "scalar" measurements stay scalar.

#include "kernels.hpp"

namespace vchunk::kernels {
namespace {

template <bool IsMax>
std::uint8_t linear_extreme(const std::uint8_t* data, std::size_t len, std::size_t* position) {
  std::uint8_t best = data[0];
  std::size_t at = 0;
  for (std::size_t i = 1; i < len; ++i) {
    if (IsMax ? data[i] > best : data[i] < best) {
      best = data[i];
      at = i;
    }
  }
  *position = at;
  return best;
}

std::uint8_t extreme(const std::uint8_t* data, std::size_t len, ExtremeMode mode, std::size_t* position) {
  return mode == ExtremeMode::max ? linear_extreme<true>(data, len, position)
                                  : linear_extreme<false>(data, len, position);
}

template <class Pred>
std::size_t linear_scan(const std::uint8_t* data, std::size_t len, Pred pred) {
  for (std::size_t i = 0; i < len; ++i) {
    if (pred(data[i])) return i;
  }
  return len;
}

std::size_t scan(const std::uint8_t* data, std::size_t len, std::uint8_t target, Comparator cmp) {
  switch (cmp) {
    case Comparator::gt: return linear_scan(data, len, [target](std::uint8_t b) { return b > target; });
    case Comparator::geq: return linear_scan(data, len, [target](std::uint8_t b) { return b >= target; });
    case Comparator::lt: return linear_scan(data, len, [target](std::uint8_t b) { return b < target; });
    case Comparator::leq: return linear_scan(data, len, [target](std::uint8_t b) { return b <= target; });
    case Comparator::eq: return linear_scan(data, len, [target](std::uint8_t b) { return b == target; });
  }
  return len;
}

}  // namespace

const KernelTable scalar_kernels{&extreme, &scan};

}  // namespace vchunk::kernels
