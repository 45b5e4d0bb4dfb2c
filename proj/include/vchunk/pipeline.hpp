#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vchunk/chunker.hpp"
#include "vchunk/datasets.hpp"
#include "vchunk/dedup.hpp"
#include "vchunk/metrics.hpp"

namespace vchunk {

struct PipelineOptions {
  ChunkerConfig chunker;
  unsigned workers = 1;
  /// Off: chunk only; the fingerprinting phase then takes zero time and no
  /// dedup counts are produced.
  bool fingerprint = true;
  /// Stores unique chunks and keeps recipes when set.
  ChunkStore* store = nullptr;
  /// Recipe files are written here (one per input, named by input order).
  std::optional<std::filesystem::path> recipe_dir;
  /// Rebuild every file from the store and compare digests. Uses a private
  /// in-memory store when `store` is null.
  bool verify = false;
};

/// Outcome for one input file.
struct FileOutcome {
  std::string name;
  std::uint64_t size = 0;
  DedupCounts counts;
  PatternCounters counters;
  std::vector<std::uint64_t> chunk_sizes;
  std::uint64_t cap_chunks = 0;
  PhaseTimings phases;
  std::optional<FileRecipe> recipe;
};

/// Chunks `data` (timed) and then fingerprints and indexes its chunks (timed
/// separately). Data must already be resident.
FileOutcome process_buffer(const std::string& name, ByteSpan data, const PipelineOptions& options,
                           FingerprintIndex& index, ChunkStore* store);

struct PipelineResult {
  std::vector<FileOutcome> files;  // input order
  DedupCounts counts;
  PatternCounters counters;
  PhaseTimings phases;             // summed over files
  double wall_seconds = 0;
  std::uint64_t cap_chunks = 0;
  std::uint64_t metadata_bytes = 0;  // serialized recipes plus index snapshot
  bool verified = false;

  std::vector<std::uint64_t> all_chunk_sizes() const;
};

/// A file to feed through the pipeline: a display name and a loader.
struct PipelineInput {
  std::string name;
  std::function<std::vector<std::uint8_t>()> load;
};

std::vector<PipelineInput> inputs_from_walk(const CorpusWalk& walk);

/// Runs every input through the pipeline on `options.workers` threads. Throws
/// the first error encountered (IoError, VerificationError, ...).
PipelineResult run_pipeline(const std::vector<PipelineInput>& inputs, const PipelineOptions& options,
                            FingerprintIndex& index);

/// Size of the index snapshot text.
std::uint64_t snapshot_bytes(const FingerprintIndex& index);

}  // namespace vchunk
