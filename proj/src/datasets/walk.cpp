#include <algorithm>
#include <fstream>

#include "vchunk/datasets.hpp"
#include "vchunk/errors.hpp"

namespace fs = std::filesystem;

namespace vchunk {

std::uint64_t CorpusWalk::total_bytes() const noexcept {
  std::uint64_t total = 0;
  for (const auto& f : files) total += f.size;
  return total;
}

namespace {

void consider(const fs::path& path, const std::string& relative, CorpusWalk& out) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) {
    out.unreadable.push_back({path.string(), ec.message()});
    return;
  }
  if (size == 0) {
    ++out.empty_skipped;
    return;
  }
  std::ifstream probe(path, std::ios::binary);
  if (!probe) {
    out.unreadable.push_back({path.string(), "cannot open for reading"});
    return;
  }
  out.files.push_back({path, relative, size});
}

void walk_directory(const fs::path& root, const fs::path& dir, CorpusWalk& out) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) {
    out.unreadable.push_back({dir.string(), ec.message()});
    return;
  }
  for (const fs::directory_iterator end; it != end;) {
    const fs::directory_entry entry = *it;
    std::error_code type_ec;
    if (entry.is_directory(type_ec)) {
      if (!entry.is_symlink(type_ec)) walk_directory(root, entry.path(), out);
    } else if (entry.is_regular_file(type_ec)) {
      consider(entry.path(), entry.path().lexically_relative(root).generic_string(), out);
    }
    it.increment(ec);
    if (ec) {
      out.unreadable.push_back({dir.string(), ec.message()});
      return;
    }
  }
}

}  // namespace

CorpusWalk walk_corpus(const fs::path& root) {
  CorpusWalk out;
  std::error_code ec;
  const auto status = fs::status(root, ec);
  if (ec || !fs::exists(status)) throw IoError("corpus root " + root.string() + " does not exist");

  if (fs::is_regular_file(status)) {
    consider(root, root.filename().generic_string(), out);
    return out;
  }
  if (!fs::is_directory(status)) throw IoError("corpus root " + root.string() + " is neither a file nor a directory");

  walk_directory(root, root, out);
  std::sort(out.files.begin(), out.files.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.relative < b.relative; });
  return out;
}

}  // namespace vchunk
