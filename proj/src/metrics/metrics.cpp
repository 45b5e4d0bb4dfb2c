#include "vchunk/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vchunk/errors.hpp"

namespace vchunk {

double time_seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

ThroughputStats measure_throughput(const std::function<void()>& work, std::uint64_t bytes, unsigned runs) {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  ThroughputStats s;
  s.bytes = bytes;
  s.runs = runs;
  work();
  std::vector<double> rates;
  for (unsigned r = 0; r < runs; ++r) {
    const double secs = time_seconds(work);
    s.seconds.push_back(secs);
    rates.push_back(secs > 0 ? static_cast<double>(bytes) / secs : 0.0);
  }
  s.mean_bps = std::accumulate(rates.begin(), rates.end(), 0.0) / runs;
  if (runs > 1) {
    double sq = 0;
    for (double r : rates) sq += (r - s.mean_bps) * (r - s.mean_bps);
    s.stddev_bps = std::sqrt(sq / (runs - 1));
  }
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  s.min_bps = *lo;
  s.max_bps = *hi;
  return s;
}

ThroughputStats measure_chunking_throughput(ByteSpan data, const ChunkerConfig& cfg, unsigned runs,
                                            PatternCounters* counters) {
  std::vector<Boundary> sink;
  bool first = true;
  return measure_throughput(
      [&] {
        PatternCounters local;
        sink = chunk_buffer(data, cfg, &local);
        if (first && counters != nullptr) *counters = local;
        first = false;
      },
      data.size(), runs);
}

std::uint64_t SizeDistribution::percentile(double p) const {
  if (sorted_sizes.empty()) throw std::invalid_argument("empty distribution");
  const double n = static_cast<double>(sorted_sizes.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted_sizes.size());
  return sorted_sizes[rank - 1];
}

SizeDistribution build_cdf(std::vector<std::uint64_t> sizes, std::uint64_t cap_count) {
  if (sizes.empty()) throw std::invalid_argument("cannot build a distribution from no chunks");
  SizeDistribution d;
  std::sort(sizes.begin(), sizes.end());
  d.sorted_sizes = std::move(sizes);
  d.count = d.sorted_sizes.size();
  d.total_bytes = std::accumulate(d.sorted_sizes.begin(), d.sorted_sizes.end(), std::uint64_t{0});
  d.mean = static_cast<double>(d.total_bytes) / static_cast<double>(d.count);
  d.min = d.sorted_sizes.front();
  d.max = d.sorted_sizes.back();
  d.median = d.percentile(50);
  d.p5 = d.percentile(5);
  d.p95 = d.percentile(95);
  d.cap_count = cap_count;
  for (std::size_t i = 0; i < d.count; ++i) {
    if (i + 1 < d.count && d.sorted_sizes[i + 1] == d.sorted_sizes[i]) continue;
    d.cdf.push_back({d.sorted_sizes[i], static_cast<double>(i + 1) / static_cast<double>(d.count)});
  }
  return d;
}

std::vector<std::uint64_t> chunk_sizes(std::span<const Boundary> boundaries) {
  std::vector<std::uint64_t> out;
  out.reserve(boundaries.size());
  std::uint64_t start = 0;
  for (const auto& b : boundaries) {
    out.push_back(b.offset + 1 - start);
    start = b.offset + 1;
  }
  return out;
}

SizeDistribution build_cdf(std::span<const Boundary> boundaries) {
  const auto caps = std::count_if(boundaries.begin(), boundaries.end(),
                                  [](const Boundary& b) { return b.reason == BoundaryReason::max_size_cap; });
  return build_cdf(chunk_sizes(boundaries), static_cast<std::uint64_t>(caps));
}

nlohmann::ordered_json config_to_json(const ChunkerConfig& cfg) {
  return {{"algorithm", std::string(to_string(cfg.algorithm))},
          {"engine", std::string(cfg.engine.name())},
          {"target_avg_size", cfg.target_avg_size},
          {"window", cfg.window},
          {"half_window", cfg.half_window},
          {"min_size", cfg.min_size},
          {"max_size", cfg.max_size},
          {"mask_bits", cfg.mask_bits}};
}

nlohmann::ordered_json DedupReport::to_json() const {
  nlohmann::ordered_json j;
  j["corpus"] = corpus;
  j["algorithm"] = std::string(to_string(config.algorithm));
  j["engine"] = std::string(config.engine.name());
  j["target"] = config.target_avg_size;
  j["config"] = config_to_json(config);
  j["files"] = files;
  j["empty_files_skipped"] = empty_files_skipped;
  j["total_bytes"] = total_bytes;
  j["unique_bytes"] = unique_bytes;
  j["duplicate_bytes"] = duplicate_bytes;
  j["chunks"] = chunks;
  j["unique_chunks"] = unique_chunks;
  j["metadata_bytes"] = metadata_bytes;
  j["savings_pct"] = savings_pct;
  if (throughput) {
    j["throughput"] = {{"runs", throughput->runs},
                       {"bytes", throughput->bytes},
                       {"mean_bps", throughput->mean_bps},
                       {"stddev_bps", throughput->stddev_bps},
                       {"min_bps", throughput->min_bps},
                       {"max_bps", throughput->max_bps},
                       {"unstable", throughput->unstable()}};
  } else {
    j["throughput"] = nullptr;
  }
  j["phases"] = {{"chunking_seconds", phases.chunking_seconds},
                 {"fingerprinting_seconds", phases.fingerprinting_seconds}};
  j["pattern_counters"] = {{"bytes_ebs", counters.bytes_ebs}, {"bytes_rs", counters.bytes_rs}};
  if (sizes) {
    j["size_distribution"] = {{"count", sizes->count},     {"mean", sizes->mean}, {"median", sizes->median},
                              {"p5", sizes->p5},           {"p95", sizes->p95},   {"min", sizes->min},
                              {"max", sizes->max},         {"cap_count", sizes->cap_count}};
  } else {
    j["size_distribution"] = nullptr;
  }
  j["verified"] = verified;
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_matrix_csv(std::ostream& out, std::span<const MatrixRow> rows) {
  out << "corpus,algo,engine,target,savings_pct,tput_mean,tput_stddev,bytes_ebs,bytes_rs,error\n";
  for (const auto& r : rows) {
    out << csv_field(r.corpus) << ',' << r.algo << ',' << r.engine << ',' << r.target << ',' << std::fixed
        << std::setprecision(4) << r.savings_pct << ',' << std::setprecision(1) << r.tput_mean << ','
        << r.tput_stddev << std::defaultfloat << ',' << r.bytes_ebs << ',' << r.bytes_rs << ',' << csv_field(r.error)
        << '\n';
  }
}

void write_cdf_csv(std::ostream& out, const SizeDistribution& dist) {
  out << "size,cum_fraction\n";
  for (const auto& p : dist.cdf) out << p.size << ',' << std::setprecision(17) << p.cum_fraction << '\n';
  out << std::defaultfloat << std::setprecision(6);
}

void write_boundaries(std::ostream& out, std::span<const Boundary> boundaries) {
  for (const auto& b : boundaries) out << b.offset << ',' << to_string(b.reason) << '\n';
}

std::vector<Boundary> read_boundaries(std::istream& in) {
  std::vector<Boundary> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comma = line.find(',');
    Boundary b;
    std::optional<BoundaryReason> reason;
    if (comma != std::string::npos) {
      const auto r = std::from_chars(line.data(), line.data() + comma, b.offset);
      if (r.ec == std::errc{} && r.ptr == line.data() + comma) reason = parse_boundary_reason(line.substr(comma + 1));
    }
    if (!reason) throw IoError("malformed boundary line " + std::to_string(lineno) + ": " + line);
    b.reason = *reason;
    out.push_back(b);
  }
  return out;
}

}  // namespace vchunk
