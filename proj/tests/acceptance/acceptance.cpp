// Acceptance harness: one PASS/FAIL line per criterion. Sizes, seeds and
// tolerances are fixed here so every run measures the same thing.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "validators.hpp"
#include "vchunk/calibrate.hpp"
#include "vchunk/cli.hpp"
#include "vchunk/datasets.hpp"
#include "vchunk/dedup.hpp"
#include "vchunk/metrics.hpp"
#include "vchunk/pipeline.hpp"
#include "vchunk/stream.hpp"

namespace fs = std::filesystem;
using namespace vchunk;

namespace {

constexpr std::uint64_t MiB = std::uint64_t{1} << 20;
constexpr std::uint64_t GiB = std::uint64_t{1} << 30;

// Criterion 1
constexpr std::uint64_t kTransparencyRandomBytes = 256 * MiB;
// Criteria 2 and 3
constexpr std::uint64_t kValidatorBytes = 64 * MiB;
constexpr std::uint64_t kStreamingBytes = 64 * MiB;
// Criterion 4
constexpr double kDupLow = 49.0;
constexpr double kDupHigh = 50.0;
constexpr double kShiftCdcMin = 45.0;
constexpr double kShiftFixedMax = 5.0;
// Criterion 5
constexpr std::size_t kReconstructFiles = 1000;
// Criterion 6
constexpr double kCalibrationTolerancePct = 5.0;
constexpr std::uint64_t kFreshSampleBytes = 128 * MiB;
constexpr double kHalfWindowSmallerLow = 0.65;
constexpr double kHalfWindowSmallerHigh = 0.85;
// Criteria 7 and 8
constexpr std::uint64_t kThroughputBytes = 1 * GiB;
constexpr unsigned kThroughputRuns = 5;
constexpr double kMaxStddevFraction = 0.05;
constexpr double kRamSpeedup = 2.0;
constexpr unsigned kStabilityAttempts = 3;
constexpr std::uint64_t kPipelineFileBytes = 16 * MiB;

constexpr std::size_t kTarget = 8192;
constexpr std::uint64_t kSeed = 0xACCE97;

struct Outcome {
  bool pass = false;
  std::string summary;
};

// Every hashless run feeds this; criterion 9 reports it.
struct Accounting {
  std::uint64_t runs = 0;
  std::uint64_t mismatches = 0;
  std::string first;

  void check(const PatternCounters& c, std::uint64_t scanned, const std::string& what) {
    ++runs;
    if (c.total() != scanned && mismatches++ == 0) {
      first = what + ": ebs+rs=" + std::to_string(c.total()) + " scanned=" + std::to_string(scanned);
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void info(const std::string& line) { std::cout << "    " << line << '\n' << std::flush; }

class Harness {
 public:
  explicit Harness(fs::path scratch) : scratch_(std::move(scratch)) {}

  Outcome transparency();
  Outcome validators();
  Outcome streaming();
  Outcome dedup_oracles();
  Outcome reconstruction();
  Outcome calibration();
  Outcome throughput();
  Outcome bottleneck();
  Outcome accounting();

 private:
  const CalibrationTable& table();
  ChunkerConfig config(Algorithm algo, std::size_t target, EngineDescriptor engine);
  ByteSpan random_data(std::uint64_t bytes);
  std::vector<EngineDescriptor> accelerated_engines() const;
  int cli(std::vector<std::string> args);

  fs::path scratch_;
  std::optional<CalibrationTable> table_;
  fs::path table_path_;
  std::vector<std::uint8_t> random_;
  Accounting accounting_;
};

int Harness::cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vchunk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) info("vchunk exited " + std::to_string(code) + ": " + err.str().substr(0, 300));
  return code;
}

// The calibrate command with its defaults; shared by every criterion that
// needs windows sized for a target.
const CalibrationTable& Harness::table() {
  if (!table_) {
    table_path_ = scratch_ / "calibration.json";
    if (cli({"calibrate", "--out", table_path_.string()}) != 0) {
      throw std::runtime_error("calibrate command failed");
    }
    table_ = CalibrationTable::load(table_path_);
  }
  return *table_;
}

ChunkerConfig Harness::config(Algorithm algo, std::size_t target, EngineDescriptor engine) {
  ChunkerConfig cfg = ChunkerConfig::defaults(algo, target, engine);
  if (is_hashless(algo)) {
    const CalibrationEntry* entry = table().find(algo, target);
    if (entry == nullptr) throw std::runtime_error("no calibration entry for " + std::string(to_string(algo)));
    apply_calibration(cfg, *entry);
  }
  return cfg;
}

// Prefix of one seeded 1 GiB random buffer.
ByteSpan Harness::random_data(std::uint64_t bytes) {
  if (random_.size() < bytes) random_ = synthetic_random_bytes(kSeed, 0, kThroughputBytes);
  return ByteSpan(random_.data(), bytes);
}

std::vector<EngineDescriptor> Harness::accelerated_engines() const {
  std::vector<EngineDescriptor> out;
  for (const auto& e : detect_engines()) {
    if (e.id != EngineId::scalar) out.push_back(e);
  }
  out.push_back(emulated_mask_engine());
  return out;
}

std::string engine_label(const EngineDescriptor& e) {
  return e.has_native_mask_extract || e.id == EngineId::scalar ? std::string(e.name()) : std::string(e.name()) + "-emul";
}

std::vector<std::vector<std::uint8_t>> synthetic_files(const SyntheticSpec& spec) {
  std::vector<std::vector<std::uint8_t>> files;
  for_each_synthetic_file(spec, [&](const std::string&, ByteSpan bytes) { files.emplace_back(bytes.begin(), bytes.end()); });
  return files;
}

// 1. Every accelerated engine reproduces the scalar boundaries exactly.
Outcome Harness::transparency() {
  struct Corpus {
    std::string name;
    std::vector<ByteSpan> files;
  };
  std::vector<std::vector<std::uint8_t>> owned;
  const auto add_owned = [&](std::vector<std::uint8_t> v) -> ByteSpan {
    owned.push_back(std::move(v));
    return owned.back();
  };
  owned.reserve(64);

  std::vector<Corpus> corpora;
  corpora.push_back({"random-256MiB", {random_data(kTransparencyRandomBytes)}});

  SyntheticSpec dup{.regime = Regime::duplicate, .seed = kSeed + 1, .file_count = 4, .file_size = 8 * MiB};
  Corpus dc{"duplicate", {}};
  for (auto& f : synthetic_files(dup)) dc.files.push_back(add_owned(std::move(f)));
  corpora.push_back(dc);

  SyntheticSpec shift{.regime = Regime::shift, .seed = kSeed + 2, .file_count = 4, .file_size = 8 * MiB,
                      .shift_offset = 123457};
  Corpus sc{"shift", {}};
  for (auto& f : synthetic_files(shift)) sc.files.push_back(add_owned(std::move(f)));
  corpora.push_back(sc);

  corpora.push_back({"constant",
                     {add_owned(std::vector<std::uint8_t>(16 * MiB, 0x00)),
                      add_owned(std::vector<std::uint8_t>(16 * MiB, 0xFF)),
                      add_owned(std::vector<std::uint8_t>(16 * MiB, 0x7E))}});

  std::vector<std::uint8_t> up(16 * MiB);
  std::vector<std::uint8_t> down(16 * MiB);
  std::vector<std::uint8_t> slow(16 * MiB);
  for (std::size_t i = 0; i < up.size(); ++i) {
    up[i] = static_cast<std::uint8_t>(i);
    down[i] = static_cast<std::uint8_t>(255 - (i & 0xFF));
    slow[i] = static_cast<std::uint8_t>((i / 37) % 200);
  }
  corpora.push_back({"sawtooth", {add_owned(std::move(up)), add_owned(std::move(down)), add_owned(std::move(slow))}});

  const auto engines = accelerated_engines();
  std::uint64_t comparisons = 0;
  std::uint64_t differing = 0;
  std::string first;
  for (const auto& corpus : corpora) {
    for (Algorithm algo : hashless_algorithms()) {
      // Calibrated windows give content boundaries at every target; the
      // derived defaults exercise the cap-heavy path.
      std::vector<std::pair<std::string, ChunkerConfig>> configs;
      for (std::size_t t : {4096, 8192, 16384}) {
        configs.emplace_back("calibrated-" + std::to_string(t), config(algo, t, scalar_engine()));
      }
      configs.emplace_back("default-8192", ChunkerConfig::defaults(algo, kTarget));
      for (auto& [label, cfg] : configs) {
        for (std::size_t fi = 0; fi < corpus.files.size(); ++fi) {
          const ByteSpan data = corpus.files[fi];
          cfg.engine = scalar_engine();
          PatternCounters ref_counters;
          const auto ref = chunk_buffer(data, cfg, &ref_counters);
          accounting_.check(ref_counters, data.size(), corpus.name + "/" + std::string(to_string(algo)) + "/scalar");
          for (const auto& engine : engines) {
            cfg.engine = engine;
            PatternCounters counters;
            const auto got = chunk_buffer(data, cfg, &counters);
            const std::string what =
                corpus.name + "[" + std::to_string(fi) + "] " + std::string(to_string(algo)) + " " + label + " " + engine_label(engine);
            accounting_.check(counters, data.size(), what);
            ++comparisons;
            if (got != ref || counters.bytes_ebs != ref_counters.bytes_ebs) {
              if (differing++ == 0) first = what;
            }
          }
        }
      }
    }
    info(corpus.name + ": done");
  }
  std::string engines_list;
  for (const auto& e : engines) engines_list += (engines_list.empty() ? "" : ",") + engine_label(e);
  return {differing == 0, fmt("%llu engine runs vs scalar over 5 corpora (engines %s), %llu differing%s",
                              static_cast<unsigned long long>(comparisons), engines_list.c_str(),
                              static_cast<unsigned long long>(differing), first.empty() ? "" : (", first: " + first).c_str())};
}

// 2. Every emitted boundary satisfies its algorithm's definition.
Outcome Harness::validators() {
  const EngineDescriptor engine = detect_engines().front();
  const auto data = synthetic_random_bytes(kSeed + 10, 0, kValidatorBytes);
  std::uint64_t violations = 0;
  std::string first;
  for (Algorithm algo : all_algorithms()) {
    const ChunkerConfig cfg = config(algo, kTarget, engine);
    const auto boundaries = chunk_buffer(data, cfg);
    const auto report = validate::check(data, boundaries, cfg);
    info(fmt("%-8s %8llu chunks, %8llu content, %llu violations", std::string(to_string(algo)).c_str(),
             static_cast<unsigned long long>(report.chunks), static_cast<unsigned long long>(report.content),
             static_cast<unsigned long long>(report.violations)));
    if (report.content == 0 && algo != Algorithm::fixed) {
      ++violations;
      if (first.empty()) first = std::string(to_string(algo)) + ": no content boundaries to validate";
    }
    violations += report.violations;
    if (first.empty() && report.violations > 0) first = std::string(to_string(algo)) + " " + report.first;

    // The validator must reject a boundary moved by one byte either way.
    for (const std::int64_t delta : {-1, 1}) {
      auto moved = boundaries;
      const auto it = std::find_if(moved.begin(), moved.end(),
                                   [](const Boundary& b) { return b.reason == BoundaryReason::content; });
      if (it == moved.end()) continue;
      it->offset = static_cast<std::uint64_t>(static_cast<std::int64_t>(it->offset) + delta);
      if (validate::check(data, moved, cfg).violations == 0) {
        ++violations;
        if (first.empty()) first = std::string(to_string(algo)) + ": validator accepted a moved boundary";
      }
    }
  }
  return {violations == 0, fmt("8 algorithms on 64 MiB, %llu violations%s", static_cast<unsigned long long>(violations),
                               first.empty() ? "" : (": " + first).c_str())};
}

// 3. Boundaries do not depend on the read buffer size.
Outcome Harness::streaming() {
  testing::TempDir dir;
  const fs::path file = dir / "stream.bin";
  {
    const auto data = synthetic_random_bytes(kSeed + 20, 0, kStreamingBytes);
    std::ofstream out(file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  }
  const auto whole = read_file(file);
  const EngineDescriptor engine = detect_engines().front();
  const std::vector<std::size_t> buffers = {64 * 1024, 1024 * 1024, whole.size()};
  std::uint64_t differing = 0;
  std::string first;
  for (Algorithm algo : all_algorithms()) {
    const ChunkerConfig cfg = config(algo, kTarget, engine);
    const auto reference = chunk_buffer(whole, cfg);
    for (std::size_t buffer : buffers) {
      const std::string what = std::string(to_string(algo)) + " buffer " + std::to_string(buffer);
      if (buffer < min_stream_buffer(cfg)) {
        ++differing;
        if (first.empty()) first = what + " is below the streaming minimum " + std::to_string(min_stream_buffer(cfg));
        continue;
      }
      FileReader reader(file);
      const StreamResult result = chunk_stream(reader, cfg, buffer);
      if (is_hashless(algo)) accounting_.check(result.counters, result.total_bytes, "streaming " + what);
      if (result.boundaries != reference || result.total_bytes != whole.size()) {
        ++differing;
        if (first.empty()) first = what;
      }
    }
  }
  return {differing == 0, fmt("8 algorithms x buffers {64 KiB, 1 MiB, whole file} on 64 MiB, %llu differing%s",
                              static_cast<unsigned long long>(differing), first.empty() ? "" : (": " + first).c_str())};
}

double savings(const DedupCounts& c) { return space_savings(c.total_bytes, c.unique_bytes); }

PipelineResult run_in_memory(const std::vector<std::vector<std::uint8_t>>& files, const ChunkerConfig& cfg) {
  std::vector<PipelineInput> inputs;
  for (std::size_t i = 0; i < files.size(); ++i) {
    inputs.push_back({"file" + std::to_string(i), [&files, i] { return files[i]; }});
  }
  PipelineOptions options;
  options.chunker = cfg;
  FingerprintIndex index;
  return run_pipeline(inputs, options, index);
}

// 4. Savings on regimes whose ideal answer is known.
Outcome Harness::dedup_oracles() {
  const EngineDescriptor engine = detect_engines().front();
  const auto dup = synthetic_files(
      {.regime = Regime::duplicate, .seed = kSeed + 30, .file_count = 8, .file_size = 4 * MiB, .duplication = 2});
  const auto shift = synthetic_files({.regime = Regime::shift, .seed = kSeed + 31, .file_count = 8, .file_size = 4 * MiB,
                                      .shift_bytes = 1, .shift_offset = 65536 + 17});
  const auto disjoint = synthetic_files({.regime = Regime::random, .seed = kSeed + 32, .file_count = 16, .file_size = 4 * MiB});

  bool pass = true;
  std::string first;
  const auto fail = [&](const std::string& what) {
    pass = false;
    if (first.empty()) first = what;
  };
  for (Algorithm algo : all_algorithms()) {
    const ChunkerConfig cfg = config(algo, kTarget, engine);
    const std::string name(to_string(algo));
    const double d2 = savings(run_in_memory(dup, cfg).counts);
    const double sh = savings(run_in_memory(shift, cfg).counts);
    const auto dis = run_in_memory(disjoint, cfg).counts;
    info(fmt("%-8s d=2 %6.2f%%  shift %6.2f%%  disjoint duplicate chunks %llu", name.c_str(), d2, sh,
             static_cast<unsigned long long>(dis.duplicate_chunks)));
    if (dis.duplicate_chunks != 0) fail(name + " found duplicates in a disjoint corpus");
    if (algo == Algorithm::fixed) {
      if (sh > kShiftFixedMax) fail(fmt("fixed shift savings %.2f%% > %.1f%%", sh, kShiftFixedMax));
      continue;
    }
    if (d2 < kDupLow || d2 > kDupHigh) fail(fmt("%s d=2 savings %.2f%% outside [%.1f, %.1f]", name.c_str(), d2, kDupLow, kDupHigh));
    if (sh < kShiftCdcMin) fail(fmt("%s shift savings %.2f%% < %.1f%%", name.c_str(), sh, kShiftCdcMin));
  }
  return {pass, pass ? "d=2 within [49, 50]% for all CDC, shift CDC >= 45% and fixed <= 5%, disjoint 0 duplicates"
                     : first};
}

// 5. Store and verify a 1000-file corpus through the dedup command.
Outcome Harness::reconstruction() {
  testing::TempDir dir;
  const fs::path corpus = dir / "corpus";
  const std::string cal = (table(), table_path_.string());
  if (cli({"gen", "--regime", "versioned", "--seed", std::to_string(kSeed + 40), "--files", "100", "--versions", "10",
           "--file-size", "48K", "--mutation-rate", "0.002", "--out", corpus.string()}) != 0) {
    return {false, "corpus generation failed"};
  }
  const auto walk = walk_corpus(corpus);
  if (walk.files.size() != kReconstructFiles) return {false, fmt("corpus has %zu files", walk.files.size())};

  std::vector<std::string> engines;
  for (const auto& e : detect_engines()) engines.emplace_back(e.name());
  std::uint64_t combos = 0;
  std::uint64_t failures = 0;
  std::string first;
  for (Algorithm algo : all_algorithms()) {
    for (const auto& engine : engines) {
      ++combos;
      const fs::path store = dir / "store";
      const fs::path out = dir / "out";
      fs::remove_all(store);
      fs::remove_all(out);
      const std::string what = std::string(to_string(algo)) + "/" + engine;
      const int code = cli({"dedup", "--algo", std::string(to_string(algo)), "--engine", engine, "--avg-size", "8K",
                            "--calibration", cal, "--input", corpus.string(), "--out", out.string(), "--store",
                            store.string(), "--verify", "--runs", "0"});
      bool ok = code == 0;
      if (ok) {
        std::ifstream in(out / "report.json");
        const auto report = nlohmann::json::parse(in);
        std::size_t recipes = 0;
        for ([[maybe_unused]] const auto& e : fs::directory_iterator(store / "recipes")) ++recipes;
        ok = report["verified"] == true && report["files"] == kReconstructFiles && recipes == kReconstructFiles;
      }
      if (!ok && failures++ == 0) first = what + " (exit " + std::to_string(code) + ")";
    }
  }
  return {failures == 0, fmt("%llu chunker x engine combinations over %zu files, %llu failed%s",
                             static_cast<unsigned long long>(combos), kReconstructFiles,
                             static_cast<unsigned long long>(failures), first.empty() ? "" : (": " + first).c_str())};
}

// 6. Calibrated parameters hit the target on unseen data; MAXP's half window
// relative to RAM's window.
Outcome Harness::calibration() {
  const CalibrationTable& cal = table();
  const EngineDescriptor engine = detect_engines().front();
  const auto fresh = synthetic_random_bytes(kSeed + 50, 7, kFreshSampleBytes);
  bool means_ok = true;
  bool ratio_ok = true;
  double worst = 0;
  std::string ratios;
  for (std::size_t target : {4096, 8192, 16384}) {
    for (Algorithm algo : hashless_algorithms()) {
      const ChunkerConfig cfg = config(algo, target, engine);
      const double mean = mean_chunk_size(fresh, cfg);
      const double err = 100.0 * (mean - static_cast<double>(target)) / static_cast<double>(target);
      worst = std::max(worst, std::abs(err));
      info(fmt("%-7s %5zu  %-11s %6zu  fresh mean %8.1f (%+.2f%%)", std::string(to_string(algo)).c_str(), target,
               cal.find(algo, target)->parameter.c_str(), cal.find(algo, target)->value, mean, err));
      if (std::abs(err) > kCalibrationTolerancePct) means_ok = false;
    }
    const double h = static_cast<double>(cal.find(Algorithm::maxp, target)->value);
    const double w = static_cast<double>(cal.find(Algorithm::ram, target)->value);
    const double ae = static_cast<double>(cal.find(Algorithm::ae_max, target)->value);
    const double smaller = 1.0 - h / w;
    info(fmt("target %5zu: MAXP h %.0f is %.1f%% smaller than RAM w %.0f (%.1f%% smaller than AE-Max w %.0f)", target, h,
             100 * smaller, w, 100 * (1.0 - h / ae), ae));
    ratios += fmt("%s%.1f%%", ratios.empty() ? "" : "/", 100 * smaller);
    if (smaller < kHalfWindowSmallerLow || smaller > kHalfWindowSmallerHigh) ratio_ok = false;
  }
  return {means_ok && ratio_ok,
          fmt("fresh-data mean within +/-%.0f%%: %s (worst %.2f%%); MAXP h smaller than RAM w by %s at 4/8/16 KiB, "
              "required 65-85%%: %s",
              kCalibrationTolerancePct, means_ok ? "yes" : "no", worst, ratios.c_str(), ratio_ok ? "yes" : "no")};
}

ThroughputStats stable_throughput(ByteSpan data, const ChunkerConfig& cfg) {
  ThroughputStats stats;
  for (unsigned attempt = 0; attempt < kStabilityAttempts; ++attempt) {
    stats = measure_chunking_throughput(data, cfg, kThroughputRuns);
    if (stats.stddev_bps < kMaxStddevFraction * stats.mean_bps) break;
  }
  return stats;
}

// 7. Acceleration speeds up every hashless algorithm.
Outcome Harness::throughput() {
  const auto engines = detect_engines();
  if (engines.front().id == EngineId::scalar) return {true, "host has no vector engine; property holds vacuously"};
  const ByteSpan data = random_data(kThroughputBytes);
  bool pass = true;
  std::string findings;
  for (Algorithm algo : hashless_algorithms()) {
    std::map<std::string, ThroughputStats> by_engine;
    for (const auto& engine : engines) {
      const ThroughputStats s = stable_throughput(data, config(algo, kTarget, engine));
      by_engine[std::string(engine.name())] = s;
      info(fmt("%-7s %-6s %7.2f GB/s  stddev %5.2f%%", std::string(to_string(algo)).c_str(),
               std::string(engine.name()).c_str(), s.mean_bps / 1e9, 100 * s.stddev_bps / s.mean_bps));
    }
    const ThroughputStats& scalar = by_engine["scalar"];
    const ThroughputStats& best = by_engine[std::string(engines.front().name())];
    const double ratio = best.mean_bps / scalar.mean_bps;
    const bool stable = scalar.stddev_bps < kMaxStddevFraction * scalar.mean_bps &&
                        best.stddev_bps < kMaxStddevFraction * best.mean_bps;
    const bool fast = algo == Algorithm::ram ? ratio >= kRamSpeedup : ratio >= 1.0;
    if (!stable || !fast) pass = false;
    findings += fmt("%s%s %.2fx%s", findings.empty() ? "" : ", ", std::string(to_string(algo)).c_str(), ratio,
                    stable ? "" : " (unstable)");
  }
  return {pass, std::string(engines.front().name()) + " vs scalar on 1 GiB, R=5: " + findings};
}

PhaseTimings pipeline_phases(ByteSpan corpus, const ChunkerConfig& cfg, Accounting* accounting) {
  std::vector<PipelineInput> inputs;
  for (std::uint64_t off = 0; off < corpus.size(); off += kPipelineFileBytes) {
    const ByteSpan part = corpus.subspan(off, std::min<std::uint64_t>(kPipelineFileBytes, corpus.size() - off));
    inputs.push_back({"part" + std::to_string(off / kPipelineFileBytes),
                      [part] { return std::vector<std::uint8_t>(part.begin(), part.end()); }});
  }
  PipelineOptions options;
  options.chunker = cfg;
  options.workers = 1;
  FingerprintIndex index;
  const PipelineResult result = run_pipeline(inputs, options, index);
  if (accounting != nullptr) {
    for (const auto& f : result.files) accounting->check(f.counters, f.size, "pipeline " + f.name);
  }
  return result.phases;
}

// 8. Chunking stops being the slower phase once it is accelerated.
Outcome Harness::bottleneck() {
  const ByteSpan data = random_data(kThroughputBytes);
  const PhaseTimings rabin = pipeline_phases(data, config(Algorithm::rabin, kTarget, scalar_engine()), nullptr);
  const EngineDescriptor widest = detect_engines().front();
  const PhaseTimings ram = pipeline_phases(data, config(Algorithm::ram, kTarget, widest), &accounting_);
  info(fmt("rabin/scalar chunking %.3f s, fingerprinting %.3f s", rabin.chunking_seconds, rabin.fingerprinting_seconds));
  info(fmt("ram/%s chunking %.3f s, fingerprinting %.3f s", std::string(widest.name()).c_str(), ram.chunking_seconds,
           ram.fingerprinting_seconds));
  const bool pass = rabin.chunking_seconds > rabin.fingerprinting_seconds &&
                    ram.chunking_seconds <= ram.fingerprinting_seconds;
  return {pass, fmt("chunking/fingerprinting time: rabin scalar %.2f, ram %s %.2f on 1 GiB",
                    rabin.chunking_seconds / rabin.fingerprinting_seconds, std::string(widest.name()).c_str(),
                    ram.chunking_seconds / ram.fingerprinting_seconds)};
}

// 9. Every byte is charged to exactly one pattern, with the expected split.
Outcome Harness::accounting() {
  const ByteSpan data = random_data(kTransparencyRandomBytes);
  std::vector<EngineDescriptor> engines = detect_engines();
  engines.push_back(emulated_mask_engine());
  bool shape_ok = true;
  std::string shape;
  for (Algorithm algo : hashless_algorithms()) {
    for (const auto& engine : engines) {
      PatternCounters c;
      chunk_buffer(data, config(algo, kTarget, engine), &c);
      accounting_.check(c, data.size(), "accounting " + std::string(to_string(algo)) + "/" + engine_label(engine));
      const double ebs = 100.0 * static_cast<double>(c.bytes_ebs) / static_cast<double>(data.size());
      if (engine.id == EngineId::scalar) {
        info(fmt("%-7s EBS %6.2f%%  RS %6.2f%%", std::string(to_string(algo)).c_str(), ebs, 100.0 - ebs));
        shape += fmt("%s%s EBS %.1f%%", shape.empty() ? "" : ", ", std::string(to_string(algo)).c_str(), ebs);
      }
      if (algo == Algorithm::ram && ebs <= 50.0) shape_ok = false;
      if (algo == Algorithm::maxp && ebs >= 50.0) shape_ok = false;
    }
  }
  const bool exact = accounting_.mismatches == 0;
  return {exact && shape_ok,
          fmt("%llu hashless runs, %llu with ebs+rs != scanned%s; %s",
              static_cast<unsigned long long>(accounting_.runs), static_cast<unsigned long long>(accounting_.mismatches),
              accounting_.first.empty() ? "" : (" (" + accounting_.first + ")").c_str(), shape.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vchunk acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  testing::TempDir scratch;
  Harness h(scratch.path());
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"acceleration transparency", [&] { return h.transparency(); }},
      {"boundary property validators", [&] { return h.validators(); }},
      {"streaming invariance", [&] { return h.streaming(); }},
      {"dedup oracles", [&] { return h.dedup_oracles(); }},
      {"reconstruction", [&] { return h.reconstruction(); }},
      {"calibration", [&] { return h.calibration(); }},
      {"throughput direction", [&] { return h.throughput(); }},
      {"bottleneck shift", [&] { return h.bottleneck(); }},
      {"pattern accounting", [&] { return h.accounting(); }},
  };

  int passed = 0;
  int ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << o.summary << fmt(" [%.1f s]", secs) << '\n'
              << std::flush;
    if (o.pass) ++passed;
  }
  std::cout << "acceptance: " << passed << "/" << ran << " criteria passed\n";
  return passed == ran ? 0 : 1;
}
