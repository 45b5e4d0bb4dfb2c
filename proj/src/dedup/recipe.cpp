#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vchunk/dedup.hpp"
#include "vchunk/errors.hpp"

namespace vchunk {
namespace {

bool parse_u64(std::string_view text, std::uint64_t& out) {
  const auto r = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && r.ec == std::errc{} && r.ptr == text.data() + text.size();
}

}  // namespace

void FileRecipe::write(std::ostream& out) const {
  out << "recipe," << size << ',' << source_path << '\n';
  for (const auto& c : chunks) out << c.fingerprint.hex() << ',' << c.length << '\n';
}

std::string FileRecipe::serialize() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

FileRecipe FileRecipe::parse(std::istream& in) {
  FileRecipe r;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("recipe,")) throw IoError("recipe header missing");
  const std::string_view rest = std::string_view(line).substr(7);
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos || !parse_u64(rest.substr(0, comma), r.size)) {
    throw IoError("malformed recipe header: " + line);
  }
  r.source_path = std::string(rest.substr(comma + 1));

  std::uint64_t sum = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto c = line.find(',');
    RecipeEntry e;
    std::optional<Fingerprint> fp;
    if (c != std::string::npos) fp = Fingerprint::from_hex(std::string_view(line).substr(0, c));
    if (!fp || !parse_u64(std::string_view(line).substr(c + 1), e.length) || e.length == 0) {
      throw IoError("malformed recipe line " + std::to_string(lineno) + ": " + line);
    }
    e.fingerprint = *fp;
    sum += e.length;
    r.chunks.push_back(e);
  }
  if (sum != r.size) {
    throw IoError("recipe chunk lengths sum to " + std::to_string(sum) + " but header size is " +
                  std::to_string(r.size));
  }
  return r;
}

void FileRecipe::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write recipe " + path.string());
  write(out);
  if (!out) throw IoError("failed writing recipe " + path.string());
}

FileRecipe FileRecipe::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read recipe " + path.string());
  return parse(in);
}

std::vector<std::uint8_t> reconstruct_file(const FileRecipe& recipe, const ChunkStore& store) {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(recipe.size));
  for (std::size_t i = 0; i < recipe.chunks.size(); ++i) {
    const auto& entry = recipe.chunks[i];
    const auto bytes = store.get(entry.fingerprint);
    if (!bytes) throw MissingFingerprintError(entry.fingerprint.hex(), i);
    if (bytes->size() != entry.length) {
      throw VerificationError("chunk " + entry.fingerprint.hex() + " at recipe position " + std::to_string(i) +
                              " has " + std::to_string(bytes->size()) + " bytes, recipe says " +
                              std::to_string(entry.length));
    }
    out.insert(out.end(), bytes->begin(), bytes->end());
  }
  return out;
}

}  // namespace vchunk
