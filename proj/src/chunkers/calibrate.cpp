#include "vchunk/calibrate.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "vchunk/datasets.hpp"
#include "vchunk/errors.hpp"

namespace vchunk {

double mean_chunk_size(ByteSpan data, const ChunkerConfig& cfg) {
  const auto bs = chunk_buffer(data, cfg);
  return bs.empty() ? 0.0 : static_cast<double>(data.size()) / static_cast<double>(bs.size());
}

void apply_calibration(ChunkerConfig& cfg, const CalibrationEntry& entry) {
  if (entry.algorithm == Algorithm::maxp) {
    cfg.half_window = entry.value;
  } else {
    cfg.window = entry.value;
  }
}

CalibrationEntry calibrate(Algorithm algo, std::size_t target, const CalibrationOptions& options) {
  if (target < kMinCalibrationTarget) {
    throw UsageError("calibration target " + std::to_string(target) + " is below the minimum of " +
                     std::to_string(kMinCalibrationTarget) + " bytes");
  }
  if (!is_hashless(algo)) throw UsageError("calibration applies to hashless algorithms only");

  const auto data = synthetic_random_bytes(options.seed, 0, options.sample_chunks * target);
  ChunkerConfig cfg = ChunkerConfig::defaults(algo, target, options.engine);

  CalibrationEntry e;
  e.algorithm = algo;
  e.target = target;
  e.parameter = algo == Algorithm::maxp ? "half_window" : "window";

  std::map<std::size_t, double> seen;
  const auto eval = [&](std::size_t p) {
    if (auto it = seen.find(p); it != seen.end()) return it->second;
    ++e.iterations;
    CalibrationEntry probe = e;
    probe.value = p;
    ChunkerConfig c = cfg;
    apply_calibration(c, probe);
    return seen[p] = mean_chunk_size(data, c);
  };

  // Smallest p whose mean reaches the target, then the closer of p and p - 1.
  std::size_t lo = 1;
  std::size_t hi = cfg.max_size - 1;
  while (lo < hi && e.iterations < options.max_iterations) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (eval(mid) >= static_cast<double>(target)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  eval(lo);
  if (lo > 1) eval(lo - 1);

  const double t = static_cast<double>(target);
  auto best = seen.begin();
  for (auto it = seen.begin(); it != seen.end(); ++it) {
    if (std::abs(it->second - t) < std::abs(best->second - t)) best = it;
  }
  e.value = best->first;
  e.mean_chunk = best->second;
  e.error_pct = 100.0 * (best->second - t) / t;
  e.converged = std::abs(e.error_pct) <= options.tolerance_pct;
  return e;
}

const CalibrationEntry* CalibrationTable::find(Algorithm algo, std::size_t target) const {
  for (const auto& e : entries) {
    if (e.algorithm == algo && e.target == target) return &e;
  }
  return nullptr;
}

nlohmann::ordered_json CalibrationTable::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "vchunk-calibration/1";
  j["seed"] = seed;
  j["sample_chunks"] = sample_chunks;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    arr.push_back({{"algorithm", std::string(to_string(e.algorithm))},
                   {"target", e.target},
                   {"parameter", e.parameter},
                   {"value", e.value},
                   {"mean_chunk", e.mean_chunk},
                   {"error_pct", e.error_pct},
                   {"converged", e.converged},
                   {"iterations", e.iterations}});
  }
  j["entries"] = std::move(arr);
  return j;
}

CalibrationTable CalibrationTable::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "vchunk-calibration/1") throw IoError("unsupported calibration format");
    CalibrationTable t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.sample_chunks = j.at("sample_chunks").get<std::uint64_t>();
    for (const auto& item : j.at("entries")) {
      CalibrationEntry e;
      const auto algo = parse_algorithm(item.at("algorithm").get<std::string>());
      if (!algo || !is_hashless(*algo)) throw IoError("calibration entry names an unknown hashless algorithm");
      e.algorithm = *algo;
      e.target = item.at("target").get<std::size_t>();
      e.parameter = item.at("parameter").get<std::string>();
      e.value = item.at("value").get<std::size_t>();
      e.mean_chunk = item.at("mean_chunk").get<double>();
      e.error_pct = item.at("error_pct").get<double>();
      e.converged = item.at("converged").get<bool>();
      e.iterations = item.at("iterations").get<unsigned>();
      if (e.value == 0) throw IoError("calibrated value must be positive");
      t.entries.push_back(e);
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed calibration table: ") + ex.what());
  }
}

void CalibrationTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError("cannot write calibration table " + path.string());
}

CalibrationTable CalibrationTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read calibration table " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw IoError("malformed calibration table " + path.string() + ": " + ex.what());
  }
}

}  // namespace vchunk
