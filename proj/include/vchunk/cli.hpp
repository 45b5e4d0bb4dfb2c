#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vchunk::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kEngineUnavailable = 3,
  kIo = 4,
  kVerification = 5,
};

/// Everything a run depends on. After resolution every field is explicit, and
/// the JSON echo of it reproduces the run.
struct RunConfig {
  std::string command;
  std::vector<std::string> algorithms;
  std::vector<std::string> engines;
  std::vector<std::uint64_t> targets;
  std::uint64_t min_size = 0;     // 0: derived from the target
  std::uint64_t max_size = 0;     // 0: derived
  std::uint64_t window = 0;       // 0: derived or calibrated
  std::uint64_t half_window = 0;  // 0: derived or calibrated
  unsigned mask_bits = 0;         // 0: derived
  std::string calibration;
  unsigned runs = 5;
  std::uint64_t buffer_size = std::uint64_t{1} << 20;
  std::string input;
  std::string out;
  std::string store;
  bool verify = false;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  std::uint64_t synthetic_size = 0;
  std::uint64_t sample_chunks = 16384;
  // gen
  std::string regime = "random";
  std::uint64_t files = 1;
  std::uint64_t file_size = std::uint64_t{64} << 20;
  unsigned duplication = 2;
  std::uint64_t shift_bytes = 1;
  std::uint64_t shift_offset = 0;
  unsigned shift_byte = 0x5A;
  double mutation_rate = 0.0;
  unsigned versions = 2;

  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

/// Entry point behind the vchunk executable. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vchunk::cli
