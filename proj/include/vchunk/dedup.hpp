#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vchunk/chunker.hpp"
#include "vchunk/fingerprint.hpp"

namespace vchunk {

struct IndexEntry {
  std::uint64_t length = 0;
  std::uint64_t refs = 0;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// Fingerprint -> (chunk length, reference count). Partitioned by digest
/// prefix; each partition has its own lock, so inserts from many threads only
/// contend when they land in the same partition.
class FingerprintIndex {
 public:
  FingerprintIndex() = default;
  FingerprintIndex(const FingerprintIndex&) = delete;
  FingerprintIndex& operator=(const FingerprintIndex&) = delete;

  /// Adds one reference; returns true when the fingerprint was new.
  bool insert(const Fingerprint& fp, std::uint64_t length);
  std::optional<IndexEntry> lookup(const Fingerprint& fp) const;

  std::size_t size() const;
  /// Sum of chunk lengths over all entries.
  std::uint64_t unique_bytes() const;

  /// Entries ordered by hex digest.
  std::vector<std::pair<Fingerprint, IndexEntry>> sorted_entries() const;

  /// Snapshot: one "hex,length,count\n" line per entry, sorted by hex digest.
  void write_snapshot(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  /// Merges a snapshot into this index. Throws IoError on malformed input.
  void load(const std::filesystem::path& path);

 private:
  static constexpr std::size_t kShards = 256;
  struct Shard {
    mutable std::mutex mu;
    std::unordered_map<Fingerprint, IndexEntry, FingerprintHash> map;
  };
  std::array<Shard, kShards> shards_;
};

/// Content-addressed chunk storage. Implementations are safe for concurrent use.
class ChunkStore {
 public:
  virtual ~ChunkStore() = default;
  /// Stores `bytes` under `fp` unless already present.
  virtual void put(const Fingerprint& fp, ByteSpan bytes) = 0;
  virtual std::optional<std::vector<std::uint8_t>> get(const Fingerprint& fp) const = 0;
  virtual bool contains(const Fingerprint& fp) const = 0;
};

class MemoryChunkStore final : public ChunkStore {
 public:
  void put(const Fingerprint& fp, ByteSpan bytes) override;
  std::optional<std::vector<std::uint8_t>> get(const Fingerprint& fp) const override;
  bool contains(const Fingerprint& fp) const override;
  bool erase(const Fingerprint& fp);

 private:
  mutable std::mutex mu_;
  std::unordered_map<Fingerprint, std::vector<std::uint8_t>, FingerprintHash> chunks_;
};

/// Files at <root>/<hex[0:2]>/<hex[2:4]>/<hex>.chunk.
class DirectoryChunkStore final : public ChunkStore {
 public:
  explicit DirectoryChunkStore(std::filesystem::path root);

  void put(const Fingerprint& fp, ByteSpan bytes) override;
  std::optional<std::vector<std::uint8_t>> get(const Fingerprint& fp) const override;
  bool contains(const Fingerprint& fp) const override;

  std::filesystem::path path_for(const Fingerprint& fp) const;
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
};

struct RecipeEntry {
  Fingerprint fingerprint;
  std::uint64_t length = 0;

  friend bool operator==(const RecipeEntry&, const RecipeEntry&) = default;
};

/// Text form: "recipe,<size>,<path>\n" then one "hex,length\n" per chunk.
struct FileRecipe {
  std::string source_path;
  std::uint64_t size = 0;
  std::vector<RecipeEntry> chunks;

  void write(std::ostream& out) const;
  std::string serialize() const;
  /// Throws IoError on malformed input, including a size/length mismatch.
  static FileRecipe parse(std::istream& in);

  void save(const std::filesystem::path& path) const;
  static FileRecipe load(const std::filesystem::path& path);

  friend bool operator==(const FileRecipe&, const FileRecipe&) = default;
};

/// Replays a recipe. Throws MissingFingerprintError for an absent chunk and
/// VerificationError when a stored chunk has the wrong length.
std::vector<std::uint8_t> reconstruct_file(const FileRecipe& recipe, const ChunkStore& store);

struct DedupCounts {
  std::uint64_t total_bytes = 0;
  std::uint64_t unique_bytes = 0;
  std::uint64_t duplicate_bytes = 0;
  std::uint64_t chunks = 0;
  std::uint64_t unique_chunks = 0;
  std::uint64_t duplicate_chunks = 0;

  DedupCounts& operator+=(const DedupCounts& o) noexcept;
  friend bool operator==(const DedupCounts&, const DedupCounts&) = default;
};

/// Fingerprints each chunk of `data` and looks it up; new chunks go to `store`
/// (if any), every chunk is appended to `recipe` (if any).
DedupCounts dedup_stream(std::span<const Boundary> boundaries, ByteSpan data, FingerprintIndex& index,
                         ChunkStore* store = nullptr, FileRecipe* recipe = nullptr);

/// 100 * (total - unique) / total. Throws std::invalid_argument("empty corpus")
/// when total is zero and for unique > total.
double space_savings(std::uint64_t total_bytes, std::uint64_t unique_bytes);

}  // namespace vchunk
