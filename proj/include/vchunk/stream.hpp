#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "vchunk/chunker.hpp"

namespace vchunk {

/// Sequential byte source. `read` returns 0 only at end of stream and throws
/// IoError on failure.
class ByteReader {
 public:
  virtual ~ByteReader() = default;
  virtual std::size_t read(std::span<std::uint8_t> out) = 0;
};

class MemoryReader final : public ByteReader {
 public:
  explicit MemoryReader(ByteSpan data) : data_(data) {}
  std::size_t read(std::span<std::uint8_t> out) override;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

class FileReader final : public ByteReader {
 public:
  explicit FileReader(const std::filesystem::path& path);
  ~FileReader() override;
  FileReader(const FileReader&) = delete;
  FileReader& operator=(const FileReader&) = delete;

  std::size_t read(std::span<std::uint8_t> out) override;

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::uint64_t offset_ = 0;
};

struct StreamResult {
  std::vector<Boundary> boundaries;  // absolute stream offsets
  PatternCounters counters;
  std::uint64_t total_bytes = 0;
};

/// Smallest read buffer chunk_stream accepts for `cfg`.
std::size_t min_stream_buffer(const ChunkerConfig& cfg) noexcept;

/// Chunks a stream through a bounded buffer. Unconsumed bytes carry over
/// between refills, so the boundaries match chunk_buffer on the whole stream
/// for any buffer_size >= min_stream_buffer(cfg). Each boundary is passed to
/// `on_boundary` as soon as it is final.
PatternCounters chunk_stream(ByteReader& reader, const ChunkerConfig& cfg, std::size_t buffer_size,
                             const std::function<void(const Boundary&)>& on_boundary);

StreamResult chunk_stream(ByteReader& reader, const ChunkerConfig& cfg, std::size_t buffer_size);

/// Whole file into memory; throws IoError.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace vchunk
