#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "vchunk/dedup.hpp"
#include "vchunk/errors.hpp"

namespace vchunk {

void MemoryChunkStore::put(const Fingerprint& fp, ByteSpan bytes) {
  std::lock_guard lock(mu_);
  chunks_.try_emplace(fp, bytes.begin(), bytes.end());
}

std::optional<std::vector<std::uint8_t>> MemoryChunkStore::get(const Fingerprint& fp) const {
  std::lock_guard lock(mu_);
  const auto it = chunks_.find(fp);
  if (it == chunks_.end()) return std::nullopt;
  return it->second;
}

bool MemoryChunkStore::contains(const Fingerprint& fp) const {
  std::lock_guard lock(mu_);
  return chunks_.contains(fp);
}

bool MemoryChunkStore::erase(const Fingerprint& fp) {
  std::lock_guard lock(mu_);
  return chunks_.erase(fp) > 0;
}

DirectoryChunkStore::DirectoryChunkStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw IoError("cannot create chunk store " + root_.string() + ": " + ec.message());
}

std::filesystem::path DirectoryChunkStore::path_for(const Fingerprint& fp) const {
  const std::string hex = fp.hex();
  return root_ / hex.substr(0, 2) / hex.substr(2, 2) / (hex + ".chunk");
}

void DirectoryChunkStore::put(const Fingerprint& fp, ByteSpan bytes) {
  static std::atomic<std::uint64_t> counter{0};
  const auto final_path = path_for(fp);
  std::error_code ec;
  if (std::filesystem::exists(final_path, ec)) return;
  std::filesystem::create_directories(final_path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + final_path.parent_path().string() + ": " + ec.message());

  // Write beside the target and rename, so readers never see a partial chunk.
  std::ostringstream tmp_name;
  tmp_name << final_path.filename().string() << ".tmp." << std::this_thread::get_id() << '.' << counter++;
  const auto tmp = final_path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing chunk " + final_path.string());
    }
  }
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot store chunk " + final_path.string());
  }
}

std::optional<std::vector<std::uint8_t>> DirectoryChunkStore::get(const Fingerprint& fp) const {
  const auto path = path_for(fp);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) return std::nullopt;
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<std::uint8_t> out(size);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(size));
  if (!in) throw IoError("failed reading chunk " + path.string());
  return out;
}

bool DirectoryChunkStore::contains(const Fingerprint& fp) const {
  std::error_code ec;
  return std::filesystem::exists(path_for(fp), ec);
}

}  // namespace vchunk
