#include <doctest.h>

#include <array>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "vchunk/engine.hpp"
#include "vchunk/errors.hpp"

using namespace vchunk;

namespace {

std::vector<EngineDescriptor> engines_under_test() {
  auto out = detect_engines();
  out.push_back(emulated_mask_engine());
  return out;
}

constexpr Comparator kComparators[] = {Comparator::gt, Comparator::geq, Comparator::lt, Comparator::leq,
                                       Comparator::eq};

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("scalar engine is always detected last") {
  const auto engines = detect_engines();
  REQUIRE(!engines.empty());
  CHECK(engines.back() == scalar_engine());
  CHECK(engines.back().lane_width_bytes == 1);
  for (std::size_t i = 1; i < engines.size(); ++i) {
    CHECK(engines[i - 1].lane_width_bytes > engines[i].lane_width_bytes);
  }
}

TEST_CASE("select_engine resolves names") {
  CHECK(select_engine("scalar") == scalar_engine());
  CHECK(select_engine("auto") == detect_engines().front());
  CHECK_THROWS_AS(select_engine("v1024"), UsageError);
  for (auto name : kEngineNames) {
    bool present = false;
    for (const auto& e : detect_engines()) present = present || e.name() == name;
    if (present) {
      CHECK(select_engine(name).name() == name);
    } else {
      CHECK_THROWS_AS(select_engine(name), EngineUnavailableError);
    }
  }
}

TEST_CASE("emulated mask engine reports no native extract") {
  const auto e = emulated_mask_engine();
  CHECK(e.lane_width_bytes == 16);
  CHECK_FALSE(e.has_native_mask_extract);
}

TEST_CASE("extreme byte search rejects an empty region") {
  for (const auto& e : engines_under_test()) {
    CHECK_THROWS_WITH_AS(extreme_byte_search(e, ByteSpan{}, ExtremeMode::max), "empty region",
                         std::invalid_argument);
  }
}

TEST_CASE("extreme byte search matches a linear scan for every length up to 300") {
  const auto data = oracle::random_bytes(400, 11);
  const auto ties = oracle::random_bytes(400, 12, 3);
  for (const auto& e : engines_under_test()) {
    CAPTURE(e.name());
    for (const auto* src : {&data, &ties}) {
      for (std::size_t off : {0u, 1u, 7u}) {
        for (std::size_t len = 1; len <= 300; ++len) {
          for (auto mode : {ExtremeMode::max, ExtremeMode::min}) {
            const auto [v, p] = oracle::extreme(src->data() + off, len, mode == ExtremeMode::max);
            const auto got = extreme_byte_search(e, ByteSpan(src->data() + off, len), mode);
            REQUIRE(got.value == v);
            REQUIRE(got.position == p);
          }
        }
      }
    }
  }
}

TEST_CASE("extreme at lane straddles") {
  for (const auto& e : engines_under_test()) {
    const std::size_t w = e.lane_width_bytes;
    for (std::size_t len : {w > 1 ? w - 1 : 1, w, w + 1, 2 * w + 3, 8 * w + 5}) {
      for (std::size_t at = 0; at < len; ++at) {
        std::vector<std::uint8_t> buf(len, 100);
        buf[at] = 200;
        auto got = extreme_byte_search(e, buf, ExtremeMode::max);
        REQUIRE(got == ExtremeByte{200, at});
        buf[at] = 3;
        got = extreme_byte_search(e, buf, ExtremeMode::min);
        REQUIRE(got == ExtremeByte{3, at});
      }
    }
  }
}

TEST_CASE("range scan matches a linear scan") {
  const auto data = oracle::random_bytes(600, 21);
  for (const auto& e : engines_under_test()) {
    CAPTURE(e.name());
    for (std::size_t len = 0; len <= 520; len += (len < 140 ? 1 : 13)) {
      for (auto cmp : kComparators) {
        for (int t : {0, 1, 17, 128, 200, 250, 254, 255}) {
          const auto want = oracle::scan(data.data(), len, static_cast<std::uint8_t>(t), cmp);
          const auto got = range_scan(e, ByteSpan(data.data(), len), static_cast<std::uint8_t>(t), cmp);
          REQUIRE(got == want);
        }
      }
    }
  }
}

TEST_CASE("range scan finds a single match at every position") {
  for (const auto& e : engines_under_test()) {
    const std::size_t w = e.lane_width_bytes;
    for (std::size_t len : {w > 1 ? w - 1 : 1, w, w + 1, 2 * w + 3, 4 * w + 1, 9 * w + 7}) {
      for (std::size_t at = 0; at < len; ++at) {
        std::vector<std::uint8_t> buf(len, 50);
        buf[at] = 51;
        REQUIRE(range_scan(e, buf, 50, Comparator::gt) == at);
        REQUIRE(range_scan(e, buf, 51, Comparator::eq) == at);
        buf[at] = 49;
        REQUIRE(range_scan(e, buf, 50, Comparator::lt) == at);
        REQUIRE(range_scan(e, buf, 49, Comparator::leq) == at);
      }
      std::vector<std::uint8_t> flat(len, 50);
      REQUIRE_FALSE(range_scan(e, flat, 50, Comparator::gt).has_value());
      REQUIRE(range_scan(e, flat, 50, Comparator::geq) == 0u);
    }
  }
}

TEST_CASE("comparators at the byte range edges") {
  const std::vector<std::uint8_t> buf = {0, 255, 0, 255};
  for (const auto& e : engines_under_test()) {
    CHECK_FALSE(range_scan(e, buf, 255, Comparator::gt).has_value());
    CHECK_FALSE(range_scan(e, buf, 0, Comparator::lt).has_value());
    CHECK(range_scan(e, buf, 255, Comparator::geq) == 1u);
    CHECK(range_scan(e, buf, 0, Comparator::leq) == 0u);
    CHECK(range_scan(e, buf, 254, Comparator::gt) == 1u);
    CHECK(range_scan(e, buf, 1, Comparator::lt) == 0u);
  }
}

TEST_CASE("mask_first_index") {
  CHECK_FALSE(mask_first_index(0, 16).has_value());
  CHECK(mask_first_index(1, 16) == 0u);
  CHECK(mask_first_index(0x8000, 16) == 15u);
  CHECK_FALSE(mask_first_index(0x10000, 16).has_value());
  CHECK(mask_first_index(std::uint64_t{1} << 63, 64) == 63u);
  CHECK(mask_first_index(0b101000, 32) == 3u);
}

TEST_CASE("emulated mask extraction matches a bitwise reference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<std::uint8_t, 16> lanes{};
    std::uint16_t want = 0;
    for (unsigned i = 0; i < 16; ++i) {
      const bool set = (rng() & 1) != 0;
      lanes[i] = set ? 0xFF : 0x00;
      if (set) want |= static_cast<std::uint16_t>(1u << i);
    }
    REQUIRE(emulated_mask_extract(lanes) == want);
  }
}

TEST_CASE("tree reduction agrees with sequential reduction on random regions") {
  // Max and min are associative and commutative, so any combine order must give
  // the same value; positions must still be the leftmost.
  std::mt19937_64 rng(77);
  for (const auto& e : engines_under_test()) {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t len = 1 + rng() % 5000;
      const auto data = oracle::random_bytes(len, rng(), 1 + static_cast<unsigned>(rng() % 256));
      for (auto mode : {ExtremeMode::max, ExtremeMode::min}) {
        const auto [v, p] = oracle::extreme(data.data(), len, mode == ExtremeMode::max);
        REQUIRE(extreme_byte_search(e, data, mode) == ExtremeByte{v, p});
      }
    }
  }
}

TEST_CASE("names") {
  CHECK(to_string(Comparator::geq) == "GEQ");
  CHECK(to_string(ExtremeMode::min) == "MIN");
  CHECK(scalar_engine().name() == "scalar");
}

}  // TEST_SUITE
