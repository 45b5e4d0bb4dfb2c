#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>

#include "vchunk/calibrate.hpp"
#include "vchunk/chunker.hpp"
#include "vchunk/cli.hpp"
#include "vchunk/datasets.hpp"
#include "vchunk/dedup.hpp"
#include "vchunk/errors.hpp"
#include "vchunk/metrics.hpp"
#include "vchunk/pipeline.hpp"
#include "vchunk/stream.hpp"

namespace fs = std::filesystem;

namespace vchunk::cli {
namespace {

std::string algorithm_vocabulary() {
  std::string out;
  for (auto a : all_algorithms()) {
    if (!out.empty()) out += ", ";
    out += to_string(a);
  }
  return out;
}

Algorithm parse_algorithm_or_throw(const std::string& name) {
  const auto algo = parse_algorithm(name);
  if (!algo) throw UsageError("unknown algorithm '" + name + "'; valid: " + algorithm_vocabulary());
  return *algo;
}

std::vector<std::string> non_empty(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    if (!s.empty()) out.push_back(s);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string human_bytes(double b) {
  const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
  int u = 0;
  while (b >= 1024 && u < 4) {
    b /= 1024;
    ++u;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f %s", b, units[u]);
  return buf;
}

ChunkerConfig resolve_chunker(const RunConfig& rc, Algorithm algo, const EngineDescriptor& engine,
                              std::uint64_t target, const CalibrationTable* calibration) {
  if (target == 0) throw UsageError("--avg-size must be positive");
  ChunkerConfig cfg = ChunkerConfig::defaults(algo, target, engine);
  if (rc.min_size != 0) cfg.min_size = rc.min_size;
  if (rc.max_size != 0) cfg.max_size = rc.max_size;
  if (calibration != nullptr) {
    if (const auto* entry = calibration->find(algo, target)) apply_calibration(cfg, *entry);
  }
  if (rc.window != 0) cfg.window = rc.window;
  if (rc.half_window != 0) cfg.half_window = rc.half_window;
  if (rc.mask_bits != 0) cfg.mask_bits = rc.mask_bits;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid chunker configuration: ") + e.what());
  }
  return cfg;
}

std::optional<CalibrationTable> load_calibration(const RunConfig& rc) {
  if (rc.calibration.empty()) return std::nullopt;
  return CalibrationTable::load(rc.calibration);
}

template <class T>
T single(const std::vector<T>& values, const char* flag) {
  if (values.size() != 1) throw UsageError(std::string(flag) + " takes exactly one value for this command");
  return values.front();
}

/// Pins the resolved chunker parameters into the echo.
void pin(RunConfig& rc, const ChunkerConfig& cfg) {
  rc.algorithms = {std::string(to_string(cfg.algorithm))};
  rc.engines = {std::string(cfg.engine.name())};
  rc.targets = {cfg.target_avg_size};
  rc.min_size = cfg.min_size;
  rc.max_size = cfg.max_size;
  rc.window = cfg.window;
  rc.half_window = cfg.half_window;
  rc.mask_bits = cfg.mask_bits;
}

void report_walk(const CorpusWalk& walk, const std::string& root, std::ostream& err) {
  if (walk.files.empty()) err << "warning: no non-empty files under " << root << "\n";
  if (walk.empty_skipped > 0) err << "warning: skipped " << walk.empty_skipped << " empty file(s)\n";
  for (const auto& u : walk.unreadable) err << "warning: cannot read " << u.path << ": " << u.reason << "\n";
}

nlohmann::ordered_json unreadable_json(const CorpusWalk& walk) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& u : walk.unreadable) arr.push_back({{"path", u.path}, {"reason", u.reason}});
  return arr;
}

nlohmann::ordered_json distribution_json(const std::optional<SizeDistribution>& d) {
  if (!d) return nullptr;
  return {{"count", d->count}, {"mean", d->mean}, {"median", d->median}, {"p5", d->p5},
          {"p95", d->p95},     {"min", d->min},   {"max", d->max},       {"cap_count", d->cap_count}};
}

void require_set(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

// ---------------------------------------------------------------- chunk

int cmd_chunk(RunConfig rc, std::ostream& out, std::ostream& err) {
  require_set(rc.input, "--input");
  require_set(rc.out, "--out");
  const Algorithm algo = parse_algorithm_or_throw(single(rc.algorithms, "--algo"));
  const EngineDescriptor engine = select_engine(single(rc.engines, "--engine"));
  const auto calibration = load_calibration(rc);
  const ChunkerConfig cfg =
      resolve_chunker(rc, algo, engine, single(rc.targets, "--avg-size"), calibration ? &*calibration : nullptr);
  pin(rc, cfg);
  if (rc.buffer_size < min_stream_buffer(cfg)) {
    throw UsageError("--buffer-size must be at least " + std::to_string(min_stream_buffer(cfg)) +
                     " bytes for this configuration");
  }

  const CorpusWalk walk = walk_corpus(rc.input);
  report_walk(walk, rc.input, err);
  const fs::path out_dir = rc.out;
  make_dir(out_dir / "boundaries");
  write_json(out_dir / "config.json", rc.to_json());

  std::vector<std::uint64_t> sizes;
  std::uint64_t caps = 0;
  std::uint64_t total = 0;
  PatternCounters counters;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : walk.files) {
    const fs::path bpath = out_dir / "boundaries" / (f.relative + ".txt");
    make_dir(bpath.parent_path());
    std::ofstream bout(bpath, std::ios::binary);
    if (!bout) throw IoError("cannot write " + bpath.string());
    FileReader reader(f.path);
    std::uint64_t start = 0;
    std::uint64_t count = 0;
    counters += chunk_stream(reader, cfg, static_cast<std::size_t>(rc.buffer_size), [&](const Boundary& b) {
      bout << b.offset << ',' << to_string(b.reason) << '\n';
      sizes.push_back(b.offset + 1 - start);
      if (b.reason == BoundaryReason::max_size_cap) ++caps;
      start = b.offset + 1;
      ++count;
    });
    bout.close();
    if (!bout) throw IoError("failed writing " + bpath.string());
    total += start;
    files.push_back({{"path", f.relative}, {"bytes", start}, {"chunks", count}});
  }

  std::optional<SizeDistribution> dist;
  if (!sizes.empty()) dist = build_cdf(std::move(sizes), caps);
  {
    std::ofstream cdf(out_dir / "cdf.csv", std::ios::binary);
    if (dist) write_cdf_csv(cdf, *dist);
    else cdf << "size,cum_fraction\n";
    if (!cdf) throw IoError("cannot write " + (out_dir / "cdf.csv").string());
  }
  nlohmann::ordered_json summary;
  summary["config"] = config_to_json(cfg);
  summary["input"] = rc.input;
  summary["files"] = std::move(files);
  summary["empty_files_skipped"] = walk.empty_skipped;
  summary["unreadable"] = unreadable_json(walk);
  summary["total_bytes"] = total;
  summary["pattern_counters"] = {{"bytes_ebs", counters.bytes_ebs}, {"bytes_rs", counters.bytes_rs}};
  summary["size_distribution"] = distribution_json(dist);
  write_json(out_dir / "summary.json", summary);

  out << "chunked " << walk.files.size() << " file(s), " << total << " bytes into " << (dist ? dist->count : 0)
      << " chunks with " << to_string(cfg.algorithm) << " on " << cfg.engine.name();
  if (dist) out << " (mean " << static_cast<std::uint64_t>(dist->mean) << " bytes, " << dist->cap_count << " capped)";
  out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- dedup

int cmd_dedup(RunConfig rc, std::ostream& out, std::ostream& err) {
  require_set(rc.input, "--input");
  require_set(rc.out, "--out");
  const Algorithm algo = parse_algorithm_or_throw(single(rc.algorithms, "--algo"));
  const EngineDescriptor engine = select_engine(single(rc.engines, "--engine"));
  const auto calibration = load_calibration(rc);
  const ChunkerConfig cfg =
      resolve_chunker(rc, algo, engine, single(rc.targets, "--avg-size"), calibration ? &*calibration : nullptr);
  pin(rc, cfg);
  if (rc.workers == 0) throw UsageError("--workers must be at least 1");

  const CorpusWalk walk = walk_corpus(rc.input);
  report_walk(walk, rc.input, err);
  const fs::path out_dir = rc.out;
  make_dir(out_dir);
  write_json(out_dir / "config.json", rc.to_json());

  std::unique_ptr<DirectoryChunkStore> store;
  PipelineOptions options;
  options.chunker = cfg;
  options.workers = rc.workers;
  options.verify = rc.verify;
  if (!rc.store.empty()) {
    store = std::make_unique<DirectoryChunkStore>(fs::path(rc.store) / "chunks");
    make_dir(fs::path(rc.store) / "recipes");
    options.store = store.get();
    options.recipe_dir = fs::path(rc.store) / "recipes";
  }

  FingerprintIndex index;
  const auto inputs = inputs_from_walk(walk);
  const PipelineResult result = run_pipeline(inputs, options, index);
  if (!rc.store.empty()) index.save(fs::path(rc.store) / "index.csv");

  DedupReport report;
  report.corpus = rc.input;
  report.config = cfg;
  report.files = walk.files.size();
  report.empty_files_skipped = walk.empty_skipped;
  report.total_bytes = result.counts.total_bytes;
  report.unique_bytes = index.unique_bytes();
  report.duplicate_bytes = report.total_bytes - report.unique_bytes;
  report.chunks = result.counts.chunks;
  report.unique_chunks = index.size();
  report.metadata_bytes = result.metadata_bytes;
  report.savings_pct = space_savings(report.total_bytes, report.unique_bytes);
  report.phases = result.phases;
  report.counters = result.counters;
  report.verified = result.verified;
  const auto sizes = result.all_chunk_sizes();
  if (!sizes.empty()) report.sizes = build_cdf(sizes, result.cap_chunks);

  if (rc.runs > 0) {
    // The pipeline pass above warms caches; each timed pass re-chunks every
    // file with its bytes already loaded.
    std::vector<double> rates;
    ThroughputStats stats;
    stats.bytes = report.total_bytes;
    stats.runs = rc.runs;
    for (unsigned r = 0; r < rc.runs; ++r) {
      double secs = 0;
      for (const auto& input : inputs) {
        const auto data = input.load();
        secs += time_seconds([&] { (void)chunk_buffer(data, cfg); });
      }
      stats.seconds.push_back(secs);
      rates.push_back(secs > 0 ? static_cast<double>(stats.bytes) / secs : 0.0);
    }
    double sum = 0;
    for (double x : rates) sum += x;
    stats.mean_bps = sum / rates.size();
    double sq = 0;
    for (double x : rates) sq += (x - stats.mean_bps) * (x - stats.mean_bps);
    stats.stddev_bps = rates.size() > 1 ? std::sqrt(sq / (rates.size() - 1)) : 0.0;
    stats.min_bps = *std::min_element(rates.begin(), rates.end());
    stats.max_bps = *std::max_element(rates.begin(), rates.end());
    report.throughput = stats;
  }

  auto j = report.to_json();
  j["unreadable"] = unreadable_json(walk);
  write_json(out_dir / "report.json", j);
  {
    std::ofstream cdf(out_dir / "cdf.csv", std::ios::binary);
    if (report.sizes) write_cdf_csv(cdf, *report.sizes);
    else cdf << "size,cum_fraction\n";
  }

  char line[256];
  std::snprintf(line, sizeof line, "savings %.4f%% (%s of %s unique) over %zu file(s), %llu chunks", report.savings_pct,
                human_bytes(static_cast<double>(report.unique_bytes)).c_str(),
                human_bytes(static_cast<double>(report.total_bytes)).c_str(), report.files,
                static_cast<unsigned long long>(report.chunks));
  out << line << "\n";
  std::snprintf(line, sizeof line, "chunking %.3fs, fingerprinting %.3fs", report.phases.chunking_seconds,
                report.phases.fingerprinting_seconds);
  out << line << "\n";
  if (report.throughput) {
    std::snprintf(line, sizeof line, "throughput %.1f MB/s (stddev %.1f%%, %u runs)%s",
                  report.throughput->mean_bps / 1e6,
                  report.throughput->mean_bps > 0 ? 100.0 * report.throughput->stddev_bps / report.throughput->mean_bps
                                                  : 0.0,
                  report.throughput->runs, report.throughput->unstable() ? " UNSTABLE" : "");
    out << line << "\n";
  }
  if (rc.verify) out << "verified " << report.files << " file(s)\n";
  return kOk;
}

// ---------------------------------------------------------------- bench

struct LoadedFile {
  std::string name;
  std::vector<std::uint8_t> bytes;
};

int cmd_bench(RunConfig rc, std::ostream& out, std::ostream& err) {
  require_set(rc.out, "--out");
  if (rc.algorithms.empty()) throw UsageError("--algo needs at least one algorithm");
  if (rc.targets.empty()) throw UsageError("--avg-size needs at least one target");
  if (rc.runs == 0) throw UsageError("--runs must be at least 1");
  std::vector<Algorithm> algos;
  for (const auto& a : rc.algorithms) algos.push_back(parse_algorithm_or_throw(a));
  std::vector<EngineDescriptor> engines;
  for (const auto& name : rc.engines) {
    if (name == "all") {
      for (const auto& e : detect_engines()) engines.push_back(e);
    } else {
      engines.push_back(select_engine(name));
    }
  }
  if (engines.empty()) throw UsageError("--engine needs at least one engine");
  rc.engines.clear();
  for (const auto& e : engines) rc.engines.emplace_back(e.name());
  const auto calibration = load_calibration(rc);

  std::vector<LoadedFile> corpus;
  std::string corpus_id;
  if (rc.synthetic_size > 0) {
    if (!rc.input.empty()) throw UsageError("--input and --synthetic-size are mutually exclusive");
    corpus_id = "random:seed=" + std::to_string(rc.seed) + ":bytes=" + std::to_string(rc.synthetic_size);
    corpus.push_back({corpus_id, synthetic_random_bytes(rc.seed, 0, rc.synthetic_size)});
  } else {
    require_set(rc.input, "--input (or --synthetic-size)");
    corpus_id = rc.input;
    const CorpusWalk walk = walk_corpus(rc.input);
    report_walk(walk, rc.input, err);
    for (const auto& f : walk.files) corpus.push_back({f.relative, read_file(f.path)});
  }
  std::uint64_t total = 0;
  for (const auto& f : corpus) total += f.bytes.size();
  if (total == 0) throw UsageError("benchmark corpus is empty");

  const fs::path out_dir = rc.out;
  make_dir(out_dir / "cells");
  write_json(out_dir / "config.json", rc.to_json());

  std::vector<MatrixRow> rows;
  for (auto algo : algos) {
    for (const auto& engine : engines) {
      for (auto target : rc.targets) {
        MatrixRow row;
        row.corpus = corpus_id;
        row.algo = std::string(to_string(algo));
        row.engine = std::string(engine.name());
        row.target = target;
        try {
          const ChunkerConfig cfg =
              resolve_chunker(rc, algo, engine, target, calibration ? &*calibration : nullptr);
          FingerprintIndex index;
          DedupReport report;
          report.corpus = corpus_id;
          report.config = cfg;
          std::vector<std::uint64_t> sizes;
          std::uint64_t caps = 0;
          for (const auto& f : corpus) {
            PatternCounters counters;
            std::vector<Boundary> bs;
            report.phases.chunking_seconds += time_seconds([&] { bs = chunk_buffer(f.bytes, cfg, &counters); });
            DedupCounts counts;
            report.phases.fingerprinting_seconds += time_seconds([&] { counts = dedup_stream(bs, f.bytes, index); });
            report.counters += counters;
            report.chunks += counts.chunks;
            for (const auto& b : bs) caps += b.reason == BoundaryReason::max_size_cap ? 1 : 0;
            const auto s = chunk_sizes(bs);
            sizes.insert(sizes.end(), s.begin(), s.end());
          }
          report.files = corpus.size();
          report.total_bytes = total;
          report.unique_bytes = index.unique_bytes();
          report.duplicate_bytes = total - report.unique_bytes;
          report.unique_chunks = index.size();
          report.savings_pct = space_savings(total, report.unique_bytes);
          report.sizes = build_cdf(std::move(sizes), caps);
          report.throughput = measure_throughput(
              [&] {
                for (const auto& f : corpus) (void)chunk_buffer(f.bytes, cfg);
              },
              total, rc.runs);

          row.savings_pct = report.savings_pct;
          row.tput_mean = report.throughput->mean_bps;
          row.tput_stddev = report.throughput->stddev_bps;
          row.bytes_ebs = report.counters.bytes_ebs;
          row.bytes_rs = report.counters.bytes_rs;
          write_json(out_dir / "cells" / (row.algo + "_" + row.engine + "_" + std::to_string(target) + ".json"),
                     report.to_json());
          char line[200];
          std::snprintf(line, sizeof line, "%-8s %-6s %7llu  savings %8.4f%%  %10.1f MB/s +- %.1f%%%s",
                        row.algo.c_str(), row.engine.c_str(), static_cast<unsigned long long>(target),
                        row.savings_pct, row.tput_mean / 1e6,
                        row.tput_mean > 0 ? 100.0 * row.tput_stddev / row.tput_mean : 0.0,
                        report.throughput->unstable() ? "  UNSTABLE" : "");
          out << line << "\n";
        } catch (const std::exception& e) {
          row.error = e.what();
          err << "cell " << row.algo << "/" << row.engine << "/" << target << " failed: " << e.what() << "\n";
        }
        rows.push_back(row);
      }
    }
  }
  std::ofstream csv(out_dir / "matrix.csv", std::ios::binary);
  write_matrix_csv(csv, rows);
  csv.close();
  if (!csv) throw IoError("cannot write " + (out_dir / "matrix.csv").string());
  return kOk;
}

// ---------------------------------------------------------------- calibrate

int cmd_calibrate(RunConfig rc, std::ostream& out, std::ostream& err) {
  require_set(rc.out, "--out");
  const EngineDescriptor engine = select_engine(single(rc.engines, "--engine"));
  rc.engines = {std::string(engine.name())};
  if (rc.sample_chunks == 0) throw UsageError("--sample-chunks must be positive");
  std::vector<Algorithm> algos;
  for (const auto& a : rc.algorithms) {
    const Algorithm algo = parse_algorithm_or_throw(a);
    if (!is_hashless(algo)) throw UsageError("calibration applies to hashless algorithms only: ae-min, ae-max, maxp, ram");
    algos.push_back(algo);
  }
  if (algos.empty()) throw UsageError("--algo needs at least one algorithm");
  for (auto t : rc.targets) {
    if (t < kMinCalibrationTarget) {
      throw UsageError("calibration target " + std::to_string(t) + " is below the minimum of " +
                       std::to_string(kMinCalibrationTarget) + " bytes");
    }
  }

  CalibrationOptions options;
  options.seed = rc.seed;
  options.sample_chunks = rc.sample_chunks;
  options.engine = engine;
  CalibrationTable table;
  table.seed = rc.seed;
  table.sample_chunks = rc.sample_chunks;
  bool all_converged = true;
  for (auto target : rc.targets) {
    for (auto algo : algos) {
      const auto e = calibrate(algo, target, options);
      table.entries.push_back(e);
      char line[200];
      std::snprintf(line, sizeof line, "%-7s target %6zu  %s = %zu  mean %.1f (%+.2f%%)%s", std::string(to_string(algo)).c_str(),
                    e.target, e.parameter.c_str(), e.value, e.mean_chunk, e.error_pct,
                    e.converged ? "" : "  NOT CONVERGED (best found)");
      out << line << "\n";
      all_converged = all_converged && e.converged;
    }
  }
  table.save(rc.out);
  write_json(rc.out + ".config.json", rc.to_json());
  if (!all_converged) {
    err << "calibration did not converge for every entry; best-found values were written\n";
    return kFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------- gen

int cmd_gen(RunConfig rc, std::ostream& out, std::ostream&) {
  require_set(rc.out, "--out");
  SyntheticSpec spec;
  const auto regime = parse_regime(rc.regime);
  if (!regime) throw UsageError("unknown regime '" + rc.regime + "'; valid: random, duplicate, shift, versioned");
  if (rc.shift_byte > 255) throw UsageError("--shift-byte must be within 0..255");
  spec.regime = *regime;
  spec.seed = rc.seed;
  spec.file_count = static_cast<std::size_t>(rc.files);
  spec.file_size = rc.file_size;
  spec.duplication = rc.duplication;
  spec.shift_bytes = rc.shift_bytes;
  spec.shift_offset = rc.shift_offset;
  spec.shift_byte = static_cast<std::uint8_t>(rc.shift_byte);
  spec.mutation_rate = rc.mutation_rate;
  spec.versions = rc.versions;
  spec.validate();

  fs::path dir = rc.out;
  if (!dir.has_filename()) dir = dir.parent_path();
  const auto corpus = gen_synthetic(spec, dir);
  write_json(fs::path(dir.string() + ".config.json"), rc.to_json());
  std::uint64_t total = 0;
  for (const auto& f : corpus.files) total += f.size;
  out << "wrote " << corpus.files.size() << " file(s), " << total << " bytes to " << corpus.directory.string() << "\n";
  out << "manifest " << corpus.manifest.string() << "\n";
  if (const auto ideal = spec.ideal_savings_pct()) {
    char line[64];
    std::snprintf(line, sizeof line, "ideal savings %.2f%%", *ideal);
    out << line << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- parsing

/// Options bound to one subcommand. Values land in `flags`; after parsing,
/// only explicitly given options override the --config file (or defaults).
struct Command {
  std::string name;
  CLI::App* app = nullptr;
  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bindings;

  template <class T>
  CLI::Option* option(const std::string& spec, T RunConfig::*field, const std::string& desc) {
    CLI::Option* opt = app->add_option(spec, flags.*field, desc)->capture_default_str();
    bindings.push_back({opt, [this, field](RunConfig& dst) { dst.*field = flags.*field; }});
    return opt;
  }

  CLI::Option* flag(const std::string& spec, bool RunConfig::*field, const std::string& desc) {
    CLI::Option* opt = app->add_flag(spec, flags.*field, desc);
    bindings.push_back({opt, [this, field](RunConfig& dst) { dst.*field = flags.*field; }});
    return opt;
  }

  RunConfig resolve() const {
    RunConfig rc = flags;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw IoError("cannot read config " + config_path);
      try {
        rc = RunConfig::from_json(nlohmann::json::parse(in));
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed config " + config_path + ": " + e.what());
      }
      if (rc.command != name) throw UsageError("config " + config_path + " was written by '" + rc.command + "'");
      for (const auto& [opt, apply] : bindings) {
        if (opt->count() > 0) apply(rc);
      }
    }
    rc.command = name;
    return rc;
  }
};

const CLI::Validator& size_transform() {
  static const CLI::AsSizeValue transform(false);
  return transform;
}

void add_chunker_options(Command& c) {
  c.option("--algo", &RunConfig::algorithms, "Algorithms: " + algorithm_vocabulary())->delimiter(',');
  c.option("--engine", &RunConfig::engines, "Engine: auto, v512, v256, v128, scalar (overrides VCHUNK_ENGINE)")
      ->delimiter(',');
  c.option("--avg-size", &RunConfig::targets, "Target average chunk size(s), e.g. 8K")
      ->delimiter(',')
      ->transform(size_transform());
  c.option("--min-size", &RunConfig::min_size, "Minimum chunk size (hash-based); 0 derives target/4")
      ->transform(size_transform());
  c.option("--max-size", &RunConfig::max_size, "Maximum chunk size; 0 derives 4 x target")->transform(size_transform());
  c.option("--window", &RunConfig::window, "RAM/AE window; 0 derives target-1 or uses --calibration")
      ->transform(size_transform());
  c.option("--half-window", &RunConfig::half_window, "MAXP half window; 0 derives target/4 or uses --calibration")
      ->transform(size_transform());
  c.option("--mask-bits", &RunConfig::mask_bits, "Hash mask bits; 0 derives floor(log2(target))");
  c.option("--calibration", &RunConfig::calibration, "Calibration table written by 'calibrate'");
}

void add_io_options(Command& c, bool needs_input) {
  auto* in = c.option("--input", &RunConfig::input, "Corpus file or directory");
  if (needs_input) in->check(CLI::ExistingPath);
  c.option("--out", &RunConfig::out, "Output location");
  c.app->add_option("--config", c.config_path, "Re-run from an echoed config.json; explicit flags override it");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content-defined chunking and deduplication toolkit"};
  app.name("vchunk");
  app.require_subcommand(1);

  const char* env_engine = std::getenv("VCHUNK_ENGINE");
  const std::string default_engine = env_engine != nullptr && *env_engine != '\0' ? env_engine : "auto";

  std::map<std::string, std::unique_ptr<Command>> commands;
  const auto make = [&](const std::string& name, const std::string& desc) -> Command& {
    auto c = std::make_unique<Command>();
    c->name = name;
    c->app = app.add_subcommand(name, desc);
    c->flags.command = name;
    c->flags.engines = {default_engine};
    c->flags.targets = {8192};
    Command& ref = *c;
    commands[name] = std::move(c);
    return ref;
  };

  Command& chunk = make("chunk", "Chunk a corpus; write boundaries, CDF and summary");
  chunk.flags.algorithms = {"ram"};
  add_chunker_options(chunk);
  add_io_options(chunk, true);
  chunk.option("--buffer-size", &RunConfig::buffer_size, "Read buffer size")->transform(size_transform());

  Command& dedup = make("dedup", "Run the full deduplication pipeline and write a JSON report");
  dedup.flags.algorithms = {"ram"};
  dedup.flags.runs = 1;
  add_chunker_options(dedup);
  add_io_options(dedup, true);
  dedup.option("--store", &RunConfig::store, "Chunk store directory (chunks/, recipes/, index.csv)");
  dedup.flag("--verify", &RunConfig::verify, "Rebuild every file from stored chunks and compare");
  dedup.option("--workers", &RunConfig::workers, "Files processed in parallel");
  dedup.option("--runs", &RunConfig::runs, "Timed chunking passes for throughput (0 skips)");

  Command& bench = make("bench", "Benchmark matrix: algorithms x engines x targets");
  bench.flags.algorithms = {"ram", "ae-max", "ae-min", "maxp", "rabin", "gear", "fastcdc", "fixed"};
  bench.flags.engines = {"all"};
  add_chunker_options(bench);
  add_io_options(bench, true);
  bench.option("--runs", &RunConfig::runs, "Timed runs per cell after one warm-up");
  bench.option("--synthetic-size", &RunConfig::synthetic_size, "Benchmark seeded random bytes instead of --input")
      ->transform(size_transform());
  bench.option("--seed", &RunConfig::seed, "Seed for --synthetic-size");

  Command& cal = make("calibrate", "Fit hashless windows to target average sizes");
  cal.flags.algorithms = {"ae-min", "ae-max", "maxp", "ram"};
  cal.flags.targets = {4096, 8192, 16384};
  cal.option("--algo", &RunConfig::algorithms, "Hashless algorithms")->delimiter(',');
  cal.option("--engine", &RunConfig::engines, "Engine used for the search")->delimiter(',');
  cal.option("--avg-size", &RunConfig::targets, "Targets")->delimiter(',')->transform(size_transform());
  cal.option("--seed", &RunConfig::seed, "Seed of the random sample");
  cal.option("--sample-chunks", &RunConfig::sample_chunks, "Sample size in multiples of the target");
  cal.option("--out", &RunConfig::out, "Calibration table (JSON)");
  cal.app->add_option("--config", cal.config_path, "Re-run from an echoed config");

  Command& gen = make("gen", "Generate a synthetic corpus and its manifest");
  gen.option("--out", &RunConfig::out, "Corpus directory (created; must be empty)");
  gen.option("--regime", &RunConfig::regime, "random, duplicate, shift or versioned");
  gen.option("--seed", &RunConfig::seed, "Generator seed");
  gen.option("--files", &RunConfig::files, "Base files");
  gen.option("--file-size", &RunConfig::file_size, "Bytes per base file")->transform(size_transform());
  gen.option("--duplication", &RunConfig::duplication, "Copies per base file (duplicate regime)");
  gen.option("--shift-bytes", &RunConfig::shift_bytes, "Inserted bytes (shift regime)");
  gen.option("--shift-offset", &RunConfig::shift_offset, "Insert offset (shift regime)");
  gen.option("--shift-byte", &RunConfig::shift_byte, "Inserted byte value (shift regime)");
  gen.option("--mutation-rate", &RunConfig::mutation_rate, "Fraction of bytes changed per version");
  gen.option("--versions", &RunConfig::versions, "Versions per base file (versioned regime)");
  gen.app->add_option("--config", gen.config_path, "Re-run from an echoed config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto& [name, cmd] : commands) {
      if (!cmd->app->parsed()) continue;
      RunConfig rc = cmd->resolve();
      if (name == "bench" || name == "calibrate") {
        const bool algo_given = cmd->app->count("--algo") > 0;
        rc.algorithms = non_empty(rc.algorithms);
        if (algo_given && rc.algorithms.empty()) throw UsageError("--algo needs at least one algorithm");
      }
      if (name == "chunk") return cmd_chunk(rc, out, err);
      if (name == "dedup") return cmd_dedup(rc, out, err);
      if (name == "bench") return cmd_bench(rc, out, err);
      if (name == "calibrate") return cmd_calibrate(rc, out, err);
      if (name == "gen") return cmd_gen(rc, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const EngineUnavailableError& e) {
    err << "error: " << e.what() << "\n";
    return kEngineUnavailable;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << "\n";
    return kVerification;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace vchunk::cli
