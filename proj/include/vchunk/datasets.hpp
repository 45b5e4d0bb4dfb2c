#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vchunk/engine.hpp"

namespace vchunk {

struct CorpusEntry {
  std::filesystem::path path;
  std::string relative;  // generic form, relative to the walk root
  std::uint64_t size = 0;
};

struct UnreadableEntry {
  std::string path;
  std::string reason;
};

struct CorpusWalk {
  std::vector<CorpusEntry> files;  // byte-wise lexicographic order of `relative`
  std::size_t empty_skipped = 0;
  std::vector<UnreadableEntry> unreadable;

  std::uint64_t total_bytes() const noexcept;
};

/// Regular files under `root` (or `root` itself if it is a file). Empty files
/// are counted and skipped; entries that cannot be read are reported and the
/// walk continues. Throws IoError when `root` does not exist.
CorpusWalk walk_corpus(const std::filesystem::path& root);

enum class Regime : std::uint8_t { random, duplicate, shift, versioned };

std::string_view to_string(Regime regime) noexcept;
std::optional<Regime> parse_regime(std::string_view name) noexcept;

/// Deterministic synthetic corpus. Bytes come from std::mt19937_64 seeded with
/// std::seed_seq{seed_lo, seed_hi, base_index, stream}, so the same spec gives
/// the same bytes on every platform.
///
/// random     file_count independent files.
/// duplicate  each of file_count random files written `duplication` times.
/// shift      each random file X followed by X with shift_bytes copies of
///            shift_byte inserted at shift_offset.
/// versioned  each random file followed by versions - 1 successors; every
///            successor changes round(mutation_rate * size) bytes of the
///            previous version.
struct SyntheticSpec {
  Regime regime = Regime::random;
  std::uint64_t seed = 1;
  std::size_t file_count = 1;
  std::uint64_t file_size = std::uint64_t{64} << 20;
  unsigned duplication = 2;
  std::uint64_t shift_bytes = 1;
  std::uint64_t shift_offset = 0;
  std::uint8_t shift_byte = 0x5A;
  double mutation_rate = 0.0;
  unsigned versions = 2;

  /// Throws UsageError for out-of-range parameters.
  void validate() const;
  /// Savings a perfect deduplicator would reach, in percent, when every copy
  /// is an exact duplicate (duplicate regime, or versioned with rate 0).
  std::optional<double> ideal_savings_pct() const;
  std::size_t files_per_base() const noexcept;
};

/// Calls `emit(name, bytes)` for every file in order.
void for_each_synthetic_file(const SyntheticSpec& spec,
                             const std::function<void(const std::string& name, ByteSpan bytes)>& emit);

/// Seeded random bytes; the generator behind every regime.
std::vector<std::uint8_t> synthetic_random_bytes(std::uint64_t seed, std::uint64_t index, std::uint64_t size);

struct GeneratedFile {
  std::string name;
  std::uint64_t size = 0;
  std::string digest;  // hex MurmurHash3_x64_128 of the whole file
};

struct GeneratedCorpus {
  std::filesystem::path directory;
  std::filesystem::path manifest;
  std::vector<GeneratedFile> files;
};

/// Path of the manifest written beside a corpus directory.
std::filesystem::path manifest_path(const std::filesystem::path& corpus_dir);

/// Writes the corpus into `out_dir` (which must not exist or be empty) and a
/// JSON manifest beside it. On failure, files created so far are removed and
/// IoError is thrown.
GeneratedCorpus gen_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

}  // namespace vchunk
