#include "vchunk/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "vchunk/errors.hpp"
#include "vchunk/stream.hpp"

namespace vchunk {

FileOutcome process_buffer(const std::string& name, ByteSpan data, const PipelineOptions& options,
                           FingerprintIndex& index, ChunkStore* store) {
  FileOutcome out;
  out.name = name;
  out.size = data.size();
  std::vector<Boundary> boundaries;
  out.phases.chunking_seconds = time_seconds([&] { boundaries = chunk_buffer(data, options.chunker, &out.counters); });
  out.chunk_sizes = chunk_sizes(boundaries);
  for (const auto& b : boundaries) out.cap_chunks += b.reason == BoundaryReason::max_size_cap ? 1 : 0;

  if (options.fingerprint) {
    FileRecipe recipe;
    recipe.source_path = name;
    const bool keep_recipe = store != nullptr;
    out.phases.fingerprinting_seconds = time_seconds(
        [&] { out.counts = dedup_stream(boundaries, data, index, store, keep_recipe ? &recipe : nullptr); });
    if (keep_recipe) out.recipe = std::move(recipe);
  }
  return out;
}

std::vector<std::uint64_t> PipelineResult::all_chunk_sizes() const {
  std::vector<std::uint64_t> out;
  for (const auto& f : files) out.insert(out.end(), f.chunk_sizes.begin(), f.chunk_sizes.end());
  return out;
}

std::vector<PipelineInput> inputs_from_walk(const CorpusWalk& walk) {
  std::vector<PipelineInput> out;
  out.reserve(walk.files.size());
  for (const auto& f : walk.files) {
    out.push_back({f.relative, [path = f.path] { return read_file(path); }});
  }
  return out;
}

std::uint64_t snapshot_bytes(const FingerprintIndex& index) {
  std::uint64_t total = 0;
  char buf[64];
  for (const auto& [fp, entry] : index.sorted_entries()) {
    total += 32 + 3 + static_cast<std::uint64_t>(std::snprintf(buf, sizeof buf, "%llu%llu",
                                                               static_cast<unsigned long long>(entry.length),
                                                               static_cast<unsigned long long>(entry.refs)));
  }
  return total;
}

PipelineResult run_pipeline(const std::vector<PipelineInput>& inputs, const PipelineOptions& options,
                            FingerprintIndex& index) {
  options.chunker.validate();
  PipelineResult result;
  result.files.resize(inputs.size());

  MemoryChunkStore private_store;
  ChunkStore* store = options.store;
  if (store == nullptr && options.verify && options.fingerprint) store = &private_store;
  std::vector<Fingerprint> digests(options.verify ? inputs.size() : 0);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  const auto worker = [&] {
    for (std::size_t i; !failed.load() && (i = next.fetch_add(1)) < inputs.size();) {
      try {
        const std::vector<std::uint8_t> data = inputs[i].load();
        if (options.verify) digests[i] = murmur3_x64_128(data, kFingerprintSeed);
        result.files[i] = process_buffer(inputs[i].name, data, options, index, store);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  result.wall_seconds = time_seconds([&] {
    const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(inputs.size())));
    if (n == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
  });
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < result.files.size(); ++i) {
    auto& f = result.files[i];
    result.counts += f.counts;
    result.counters += f.counters;
    result.cap_chunks += f.cap_chunks;
    result.phases.chunking_seconds += f.phases.chunking_seconds;
    result.phases.fingerprinting_seconds += f.phases.fingerprinting_seconds;
    if (f.recipe) {
      result.metadata_bytes += f.recipe->serialize().size();
      if (options.recipe_dir) {
        char name[32];
        std::snprintf(name, sizeof name, "%06zu.recipe", i);
        f.recipe->save(*options.recipe_dir / name);
      }
    }
  }
  if (options.fingerprint) result.metadata_bytes += snapshot_bytes(index);

  if (options.verify && options.fingerprint) {
    for (std::size_t i = 0; i < result.files.size(); ++i) {
      const auto& f = result.files[i];
      std::vector<std::uint8_t> rebuilt;
      try {
        rebuilt = reconstruct_file(*f.recipe, *store);
      } catch (const VerificationError& e) {
        throw VerificationError("verification failed for " + f.name + ": " + e.what());
      }
      if (rebuilt.size() != f.size || murmur3_x64_128(rebuilt, kFingerprintSeed) != digests[i]) {
        throw VerificationError("verification failed for " + f.name + ": reconstructed bytes differ");
      }
    }
    result.verified = true;
  }
  return result;
}

}  // namespace vchunk
