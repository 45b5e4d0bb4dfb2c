#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vchunk/chunker.hpp"

namespace vchunk {

/// Aggregate over R timed runs (after one untimed warm-up). Rates are bytes
/// per second of boundary generation only.
struct ThroughputStats {
  std::uint64_t bytes = 0;
  unsigned runs = 0;
  std::vector<double> seconds;
  double mean_bps = 0;
  double stddev_bps = 0;  // sample standard deviation; 0 for a single run
  double min_bps = 0;
  double max_bps = 0;

  /// stddev above 5% of the mean.
  bool unstable() const noexcept { return stddev_bps > 0.05 * mean_bps; }
};

/// Times `work` `runs` times after one warm-up call. Throws
/// std::invalid_argument for runs == 0.
ThroughputStats measure_throughput(const std::function<void()>& work, std::uint64_t bytes, unsigned runs);

/// Chunking throughput over resident data. Counters (if given) come from the
/// warm-up run.
ThroughputStats measure_chunking_throughput(ByteSpan data, const ChunkerConfig& cfg, unsigned runs,
                                            PatternCounters* counters = nullptr);

/// Runs `fn` and returns its wall time in seconds (steady clock).
double time_seconds(const std::function<void()>& fn);

struct CdfPoint {
  std::uint64_t size = 0;
  double cum_fraction = 0;

  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

/// Exact empirical chunk-size distribution. Percentiles use nearest rank.
struct SizeDistribution {
  std::vector<std::uint64_t> sorted_sizes;
  std::vector<CdfPoint> cdf;  // one point per distinct size
  std::size_t count = 0;
  std::uint64_t total_bytes = 0;
  double mean = 0;
  std::uint64_t median = 0;
  std::uint64_t p5 = 0;
  std::uint64_t p95 = 0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::uint64_t cap_count = 0;  // chunks ended by the max-size cap

  std::uint64_t percentile(double p) const;
};

/// Throws std::invalid_argument for an empty list.
SizeDistribution build_cdf(std::vector<std::uint64_t> sizes, std::uint64_t cap_count = 0);
/// Sizes and cap count from a boundary list.
SizeDistribution build_cdf(std::span<const Boundary> boundaries);

std::vector<std::uint64_t> chunk_sizes(std::span<const Boundary> boundaries);

struct PhaseTimings {
  double chunking_seconds = 0;
  double fingerprinting_seconds = 0;
};

struct DedupReport {
  std::string corpus;
  ChunkerConfig config;
  std::uint64_t total_bytes = 0;
  std::uint64_t unique_bytes = 0;
  std::uint64_t duplicate_bytes = 0;
  std::uint64_t chunks = 0;
  std::uint64_t unique_chunks = 0;
  std::uint64_t metadata_bytes = 0;
  std::size_t files = 0;
  std::size_t empty_files_skipped = 0;
  double savings_pct = 0;
  std::optional<ThroughputStats> throughput;
  PhaseTimings phases;
  PatternCounters counters;
  std::optional<SizeDistribution> sizes;
  bool verified = false;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json config_to_json(const ChunkerConfig& cfg);

/// One row of the benchmark matrix.
struct MatrixRow {
  std::string corpus;
  std::string algo;
  std::string engine;
  std::uint64_t target = 0;
  double savings_pct = 0;
  double tput_mean = 0;
  double tput_stddev = 0;
  std::uint64_t bytes_ebs = 0;
  std::uint64_t bytes_rs = 0;
  std::string error;  // non-empty when the cell failed
};

/// Header: corpus,algo,engine,target,savings_pct,tput_mean,tput_stddev,bytes_ebs,bytes_rs,error
void write_matrix_csv(std::ostream& out, std::span<const MatrixRow> rows);
/// Header: size,cum_fraction
void write_cdf_csv(std::ostream& out, const SizeDistribution& dist);
/// One "offset,reason" line per boundary.
void write_boundaries(std::ostream& out, std::span<const Boundary> boundaries);
/// Throws IoError on malformed input.
std::vector<Boundary> read_boundaries(std::istream& in);

}  // namespace vchunk
