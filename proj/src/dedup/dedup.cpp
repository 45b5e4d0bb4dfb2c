#include <stdexcept>

#include "vchunk/dedup.hpp"

namespace vchunk {

DedupCounts& DedupCounts::operator+=(const DedupCounts& o) noexcept {
  total_bytes += o.total_bytes;
  unique_bytes += o.unique_bytes;
  duplicate_bytes += o.duplicate_bytes;
  chunks += o.chunks;
  unique_chunks += o.unique_chunks;
  duplicate_chunks += o.duplicate_chunks;
  return *this;
}

DedupCounts dedup_stream(std::span<const Boundary> boundaries, ByteSpan data, FingerprintIndex& index,
                         ChunkStore* store, FileRecipe* recipe) {
  DedupCounts counts;
  std::size_t start = 0;
  for (const auto& b : boundaries) {
    if (b.offset < start || b.offset >= data.size()) throw std::invalid_argument("boundaries do not partition data");
    const ByteSpan chunk = data.subspan(start, static_cast<std::size_t>(b.offset) + 1 - start);
    const Fingerprint fp = fingerprint_chunk(chunk);
    ++counts.chunks;
    counts.total_bytes += chunk.size();
    if (index.insert(fp, chunk.size())) {
      ++counts.unique_chunks;
      counts.unique_bytes += chunk.size();
      if (store != nullptr) store->put(fp, chunk);
    } else {
      ++counts.duplicate_chunks;
      counts.duplicate_bytes += chunk.size();
    }
    if (recipe != nullptr) recipe->chunks.push_back({fp, chunk.size()});
    start = static_cast<std::size_t>(b.offset) + 1;
  }
  if (start != data.size()) throw std::invalid_argument("boundaries do not partition data");
  if (recipe != nullptr) recipe->size += data.size();
  return counts;
}

double space_savings(std::uint64_t total_bytes, std::uint64_t unique_bytes) {
  if (total_bytes == 0) throw std::invalid_argument("empty corpus");
  if (unique_bytes > total_bytes) throw std::invalid_argument("unique bytes exceed total bytes");
  return 100.0 * static_cast<double>(total_bytes - unique_bytes) / static_cast<double>(total_bytes);
}

}  // namespace vchunk
