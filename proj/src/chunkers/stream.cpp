#include "vchunk/stream.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <string>

#include "vchunk/errors.hpp"

namespace vchunk {

std::size_t MemoryReader::read(std::span<std::uint8_t> out) {
  const std::size_t n = std::min(out.size(), data_.size() - pos_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
  pos_ += n;
  return n;
}

FileReader::FileReader(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "rb");
  if (file_ == nullptr) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno), 0);
}

FileReader::~FileReader() {
  if (file_ != nullptr) std::fclose(file_);
}

std::size_t FileReader::read(std::span<std::uint8_t> out) {
  const std::size_t n = std::fread(out.data(), 1, out.size(), file_);
  if (n < out.size() && std::ferror(file_)) {
    throw IoError("read failed on " + path_.string() + " at offset " + std::to_string(offset_ + n), offset_ + n);
  }
  offset_ += n;
  return n;
}

std::size_t min_stream_buffer(const ChunkerConfig& cfg) noexcept {
  return std::max(2 * cfg.max_size, cfg.lookahead() + 1);
}

PatternCounters chunk_stream(ByteReader& reader, const ChunkerConfig& cfg, std::size_t buffer_size,
                             const std::function<void(const Boundary&)>& on_boundary) {
  cfg.validate();
  if (buffer_size < min_stream_buffer(cfg)) {
    throw std::invalid_argument("read buffer of " + std::to_string(buffer_size) + " bytes is below the minimum of " +
                                std::to_string(min_stream_buffer(cfg)));
  }
  std::vector<std::uint8_t> buffer(buffer_size);
  PatternCounters counters;
  std::uint64_t base = 0;  // stream offset of buffer[0]
  std::size_t len = 0;
  std::size_t start = 0;
  bool eof = false;
  const std::size_t need = cfg.lookahead();

  for (;;) {
    if (!eof && len - start < need) {
      if (start > 0) {
        std::memmove(buffer.data(), buffer.data() + start, len - start);
        len -= start;
        base += start;
        counters.rebase(start);
        start = 0;
      }
      while (!eof && len < buffer.size()) {
        std::size_t got;
        try {
          got = reader.read(std::span(buffer).subspan(len));
        } catch (const IoError& e) {
          throw IoError(e.what(), base + len);
        }
        if (got == 0) eof = true;
        len += got;
      }
    }
    if (start == len) break;

    const Boundary b = next_boundary(ByteSpan(buffer.data(), len), start, cfg, counters);
    on_boundary(Boundary{base + b.offset, b.reason});
    start = static_cast<std::size_t>(b.offset) + 1;
  }
  return counters;
}

StreamResult chunk_stream(ByteReader& reader, const ChunkerConfig& cfg, std::size_t buffer_size) {
  StreamResult result;
  result.counters = chunk_stream(reader, cfg, buffer_size,
                                 [&](const Boundary& b) { result.boundaries.push_back(b); });
  if (!result.boundaries.empty()) result.total_bytes = result.boundaries.back().offset + 1;
  return result;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string() + ": " + ec.message(), 0);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(size));
  FileReader reader(path);
  std::size_t got = 0;
  while (got < out.size()) {
    const std::size_t n = reader.read(std::span(out).subspan(got));
    if (n == 0) break;
    got += n;
  }
  out.resize(got);
  return out;
}

}  // namespace vchunk
