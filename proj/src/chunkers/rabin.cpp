// Table-driven Rabin fingerprint (polynomial arithmetic over GF(2)), in the
// style of the LBFS rabinpoly implementation.

#include <array>
#include <bit>

#include "vchunk/chunker.hpp"

namespace vchunk {
namespace {

int degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

// (high * x^64 + low) mod d
std::uint64_t polymod(std::uint64_t high, std::uint64_t low, std::uint64_t d) {
  const int k = degree(d);
  d <<= 63 - k;
  if (high != 0) {
    if (high & (std::uint64_t{1} << 63)) high ^= d;
    for (int i = 62; i >= 0; --i) {
      if (high & (std::uint64_t{1} << i)) {
        high ^= d >> (63 - i);
        low ^= d << (i + 1);
      }
    }
  }
  for (int i = 63; i >= k; --i) {
    if (low & (std::uint64_t{1} << i)) low ^= d >> (63 - i);
  }
  return low;
}

std::uint64_t polymulmod(std::uint64_t x, std::uint64_t y, std::uint64_t d) {
  std::uint64_t high = 0;
  std::uint64_t low = (x & 1) ? y : 0;
  for (int i = 1; i < 64; ++i) {
    if (x & (std::uint64_t{1} << i)) {
      high ^= y >> (64 - i);
      low ^= y << i;
    }
  }
  return polymod(high, low, d);
}

struct RabinTables {
  int shift;
  std::array<std::uint64_t, 256> t;  // folds the byte shifted out of the top
  std::array<std::uint64_t, 256> u;  // removes the byte leaving the window

  RabinTables() {
    const int xshift = degree(kRabinPolynomial);
    shift = xshift - 8;
    const std::uint64_t top = polymod(0, std::uint64_t{1} << xshift, kRabinPolynomial);
    for (std::uint64_t j = 0; j < 256; ++j) {
      t[j] = polymulmod(j, top, kRabinPolynomial) | (j << xshift);
    }
    std::uint64_t size_shift = 1;
    for (std::size_t i = 1; i < kRabinWindow; ++i) size_shift = append(size_shift, 0);
    for (std::uint64_t i = 0; i < 256; ++i) u[i] = polymulmod(i, size_shift, kRabinPolynomial);
  }

  std::uint64_t append(std::uint64_t p, std::uint8_t m) const { return ((p << 8) | m) ^ t[p >> shift]; }
};

const RabinTables& tables() {
  static const RabinTables instance;
  return instance;
}

}  // namespace

RabinWindow::RabinWindow() noexcept { tables(); }

void RabinWindow::reset() noexcept {
  fp_ = 0;
  pos_ = 0;
  for (auto& b : ring_) b = 0;
}

std::uint64_t RabinWindow::slide(std::uint8_t in) noexcept {
  const RabinTables& tab = tables();
  if (++pos_ >= kRabinWindow) pos_ = 0;
  const std::uint8_t out = ring_[pos_];
  ring_[pos_] = in;
  fp_ = tab.append(fp_ ^ tab.u[out], in);
  return fp_;
}

}  // namespace vchunk
