#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "vchunk/dedup.hpp"
#include "vchunk/errors.hpp"

namespace vchunk {

bool FingerprintIndex::insert(const Fingerprint& fp, std::uint64_t length) {
  Shard& shard = shards_[fp.prefix()];
  std::lock_guard lock(shard.mu);
  auto [it, fresh] = shard.map.try_emplace(fp, IndexEntry{length, 0});
  ++it->second.refs;
  return fresh;
}

std::optional<IndexEntry> FingerprintIndex::lookup(const Fingerprint& fp) const {
  const Shard& shard = shards_[fp.prefix()];
  std::lock_guard lock(shard.mu);
  const auto it = shard.map.find(fp);
  if (it == shard.map.end()) return std::nullopt;
  return it->second;
}

std::size_t FingerprintIndex::size() const {
  std::size_t n = 0;
  for (const auto& shard : shards_) {
    std::lock_guard lock(shard.mu);
    n += shard.map.size();
  }
  return n;
}

std::uint64_t FingerprintIndex::unique_bytes() const {
  std::uint64_t total = 0;
  for (const auto& shard : shards_) {
    std::lock_guard lock(shard.mu);
    for (const auto& [fp, entry] : shard.map) total += entry.length;
  }
  return total;
}

std::vector<std::pair<Fingerprint, IndexEntry>> FingerprintIndex::sorted_entries() const {
  std::vector<std::pair<std::string, std::pair<Fingerprint, IndexEntry>>> keyed;
  for (const auto& shard : shards_) {
    std::lock_guard lock(shard.mu);
    for (const auto& [fp, entry] : shard.map) keyed.push_back({fp.hex(), {fp, entry}});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Fingerprint, IndexEntry>> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

void FingerprintIndex::write_snapshot(std::ostream& out) const {
  for (const auto& [fp, entry] : sorted_entries()) out << fp.hex() << ',' << entry.length << ',' << entry.refs << '\n';
}

void FingerprintIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write index snapshot " + path.string());
  write_snapshot(out);
  if (!out) throw IoError("failed writing index snapshot " + path.string());
}

void FingerprintIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read index snapshot " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto bad = [&] { return IoError(path.string() + ":" + std::to_string(lineno) + ": malformed index entry"); };
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw bad();
    const auto fp = Fingerprint::from_hex(std::string_view(line).substr(0, c1));
    IndexEntry entry;
    const char* b = line.data();
    const auto r1 = std::from_chars(b + c1 + 1, b + c2, entry.length);
    const auto r2 = std::from_chars(b + c2 + 1, b + line.size(), entry.refs);
    if (!fp || r1.ec != std::errc{} || r1.ptr != b + c2 || r2.ec != std::errc{} || r2.ptr != b + line.size() ||
        entry.refs == 0 || entry.length == 0) {
      throw bad();
    }
    Shard& shard = shards_[fp->prefix()];
    std::lock_guard lock(shard.mu);
    auto [it, fresh] = shard.map.try_emplace(*fp, IndexEntry{entry.length, 0});
    if (!fresh && it->second.length != entry.length) throw bad();
    it->second.refs += entry.refs;
  }
}

}  // namespace vchunk
