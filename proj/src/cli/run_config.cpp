#include "vchunk/cli.hpp"
#include "vchunk/errors.hpp"

namespace vchunk::cli {

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "vchunk-run-config/1";
  j["command"] = command;
  j["algorithms"] = algorithms;
  j["engines"] = engines;
  j["targets"] = targets;
  j["min_size"] = min_size;
  j["max_size"] = max_size;
  j["window"] = window;
  j["half_window"] = half_window;
  j["mask_bits"] = mask_bits;
  j["calibration"] = calibration;
  j["runs"] = runs;
  j["buffer_size"] = buffer_size;
  j["input"] = input;
  j["out"] = out;
  j["store"] = store;
  j["verify"] = verify;
  j["workers"] = workers;
  j["seed"] = seed;
  j["synthetic_size"] = synthetic_size;
  j["sample_chunks"] = sample_chunks;
  j["regime"] = regime;
  j["files"] = files;
  j["file_size"] = file_size;
  j["duplication"] = duplication;
  j["shift_bytes"] = shift_bytes;
  j["shift_offset"] = shift_offset;
  j["shift_byte"] = shift_byte;
  j["mutation_rate"] = mutation_rate;
  j["versions"] = versions;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.value("format", "") != "vchunk-run-config/1") throw UsageError("not a vchunk run config");
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    get("algorithms", c.algorithms);
    get("engines", c.engines);
    get("targets", c.targets);
    get("min_size", c.min_size);
    get("max_size", c.max_size);
    get("window", c.window);
    get("half_window", c.half_window);
    get("mask_bits", c.mask_bits);
    get("calibration", c.calibration);
    get("runs", c.runs);
    get("buffer_size", c.buffer_size);
    get("input", c.input);
    get("out", c.out);
    get("store", c.store);
    get("verify", c.verify);
    get("workers", c.workers);
    get("seed", c.seed);
    get("synthetic_size", c.synthetic_size);
    get("sample_chunks", c.sample_chunks);
    get("regime", c.regime);
    get("files", c.files);
    get("file_size", c.file_size);
    get("duplication", c.duplication);
    get("shift_bytes", c.shift_bytes);
    get("shift_offset", c.shift_offset);
    get("shift_byte", c.shift_byte);
    get("mutation_rate", c.mutation_rate);
    get("versions", c.versions);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed run config: ") + e.what());
  }
  return c;
}

}  // namespace vchunk::cli
