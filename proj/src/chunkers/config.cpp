#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vchunk/chunker.hpp"

namespace vchunk {
namespace {

struct AlgoName {
  Algorithm algo;
  std::string_view name;
};

constexpr AlgoName kAlgoNames[] = {
    {Algorithm::fixed, "fixed"},   {Algorithm::rabin, "rabin"},   {Algorithm::gear, "gear"},
    {Algorithm::fastcdc, "fastcdc"}, {Algorithm::ae_min, "ae-min"}, {Algorithm::ae_max, "ae-max"},
    {Algorithm::maxp, "maxp"},     {Algorithm::ram, "ram"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string_view to_string(Algorithm algo) noexcept {
  for (const auto& entry : kAlgoNames) {
    if (entry.algo == algo) return entry.name;
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (const auto& entry : kAlgoNames) {
    if (entry.name == name) return entry.algo;
  }
  return std::nullopt;
}

std::vector<Algorithm> all_algorithms() {
  std::vector<Algorithm> out;
  for (const auto& entry : kAlgoNames) out.push_back(entry.algo);
  return out;
}

std::vector<Algorithm> hashless_algorithms() {
  return {Algorithm::ae_min, Algorithm::ae_max, Algorithm::maxp, Algorithm::ram};
}

bool is_hashless(Algorithm algo) noexcept {
  return algo == Algorithm::ae_min || algo == Algorithm::ae_max || algo == Algorithm::maxp || algo == Algorithm::ram;
}

std::string_view to_string(BoundaryReason reason) noexcept {
  switch (reason) {
    case BoundaryReason::content: return "content";
    case BoundaryReason::max_size_cap: return "max-size-cap";
    case BoundaryReason::end_of_stream: return "end-of-stream";
  }
  return "?";
}

std::optional<BoundaryReason> parse_boundary_reason(std::string_view name) noexcept {
  for (auto r : {BoundaryReason::content, BoundaryReason::max_size_cap, BoundaryReason::end_of_stream}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

ChunkerConfig ChunkerConfig::defaults(Algorithm algo, std::size_t target, EngineDescriptor engine) {
  ChunkerConfig cfg;
  cfg.algorithm = algo;
  cfg.target_avg_size = target;
  cfg.window = target > 1 ? target - 1 : 1;
  cfg.half_window = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.25 * static_cast<double>(target))));
  cfg.min_size = std::max<std::size_t>(1, target / 4);
  cfg.max_size = 4 * target;
  cfg.mask_bits = target > 1 ? static_cast<unsigned>(std::bit_width(target) - 1) : 1;
  cfg.engine = engine;
  return cfg;
}

void ChunkerConfig::validate() const {
  require(min_size > 0, "min_size must be positive");
  require(min_size <= target_avg_size, "min_size must not exceed target_avg_size");
  require(target_avg_size <= max_size, "target_avg_size must not exceed max_size");
  require(max_size >= 2 * target_avg_size, "max_size must be at least 2 x target_avg_size");
  require(window >= 1, "window must be at least 1");
  require(half_window >= 1, "half_window must be at least 1");
  require(mask_bits >= 1, "mask_bits must be at least 1");
  switch (algorithm) {
    case Algorithm::ram:
    case Algorithm::ae_min:
    case Algorithm::ae_max:
      require(window < max_size, "window must be smaller than max_size");
      break;
    case Algorithm::maxp:
      require(half_window < max_size, "half_window must be smaller than max_size");
      break;
    case Algorithm::fastcdc:
      require(mask_bits >= 3 && mask_bits + 2 <= 64, "fastcdc needs 3 <= mask_bits <= 62");
      break;
    case Algorithm::rabin:
      require(mask_bits <= 62, "rabin mask_bits must be at most 62");
      break;
    case Algorithm::gear:
      require(mask_bits <= 64, "gear mask_bits must be at most 64");
      break;
    case Algorithm::fixed:
      break;
  }
}

std::size_t ChunkerConfig::min_chunk_distance() const noexcept {
  switch (algorithm) {
    case Algorithm::ram:
    case Algorithm::ae_min:
    case Algorithm::ae_max: return window + 1;
    case Algorithm::maxp: return half_window + 1;
    case Algorithm::fixed: return target_avg_size;
    case Algorithm::fastcdc: return min_size + 1;
    case Algorithm::rabin:
    case Algorithm::gear: return min_size;
  }
  return 1;
}

std::size_t ChunkerConfig::lookahead() const noexcept {
  switch (algorithm) {
    case Algorithm::fixed: return target_avg_size;
    case Algorithm::maxp: return max_size + half_window;
    default: return max_size;
  }
}

}  // namespace vchunk
