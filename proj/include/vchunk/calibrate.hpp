#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vchunk/chunker.hpp"

namespace vchunk {

/// Result of fitting one hashless algorithm's window to a target mean size.
/// `parameter` is "window" for RAM/AE and "half_window" for MAXP.
struct CalibrationEntry {
  Algorithm algorithm = Algorithm::ram;
  std::size_t target = 0;
  std::string parameter;
  std::size_t value = 0;
  double mean_chunk = 0;
  double error_pct = 0;  // signed, relative to target
  bool converged = false;
  unsigned iterations = 0;
};

struct CalibrationOptions {
  std::uint64_t seed = 1;
  /// Sample size in multiples of the target; the default gives about 16k chunks.
  std::uint64_t sample_chunks = 16384;
  double tolerance_pct = 5.0;
  unsigned max_iterations = 40;
  EngineDescriptor engine = scalar_engine();
};

inline constexpr std::size_t kMinCalibrationTarget = 64;

/// Binary search over the window (or half window) on seeded random data.
/// Throws UsageError for targets below 64 bytes or a non-hashless algorithm.
CalibrationEntry calibrate(Algorithm algo, std::size_t target, const CalibrationOptions& options);

/// Mean chunk size of `cfg` over `data`.
double mean_chunk_size(ByteSpan data, const ChunkerConfig& cfg);

/// Applies the calibrated parameter to `cfg`.
void apply_calibration(ChunkerConfig& cfg, const CalibrationEntry& entry);

struct CalibrationTable {
  std::uint64_t seed = 0;
  std::uint64_t sample_chunks = 0;
  std::vector<CalibrationEntry> entries;

  const CalibrationEntry* find(Algorithm algo, std::size_t target) const;
  nlohmann::ordered_json to_json() const;
  /// Throws IoError on malformed input.
  static CalibrationTable from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static CalibrationTable load(const std::filesystem::path& path);
};

}  // namespace vchunk
