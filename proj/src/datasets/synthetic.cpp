#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "vchunk/datasets.hpp"
#include "vchunk/errors.hpp"
#include "vchunk/fingerprint.hpp"

namespace fs = std::filesystem;

namespace vchunk {
namespace {

enum Stream : std::uint32_t { kBytes = 1, kMutations = 2 };

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t index, std::uint32_t stream, std::uint32_t extra = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, extra};
  return std::mt19937_64(seq);
}

std::string file_name(std::size_t base, std::size_t copy) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "f%06zu.%03zu.bin", base, copy);
  return buf;
}

void mutate(std::vector<std::uint8_t>& bytes, double rate, std::uint64_t seed, std::uint64_t base, unsigned version) {
  if (rate <= 0.0 || bytes.empty()) return;
  auto rng = seeded(seed, base, kMutations, version);
  const auto count = static_cast<std::uint64_t>(std::llround(rate * static_cast<double>(bytes.size())));
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t pos = rng() % bytes.size();
    bytes[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
  }
}

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::random: return "random";
    case Regime::duplicate: return "duplicate";
    case Regime::shift: return "shift";
    case Regime::versioned: return "versioned";
  }
  return "?";
}

std::optional<Regime> parse_regime(std::string_view name) noexcept {
  for (auto r : {Regime::random, Regime::duplicate, Regime::shift, Regime::versioned}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

void SyntheticSpec::validate() const {
  if (file_count == 0) throw UsageError("file count must be at least 1");
  if (file_size == 0) throw UsageError("file size must be at least 1");
  if (regime == Regime::duplicate && duplication == 0) throw UsageError("duplication factor must be at least 1");
  if (regime == Regime::versioned && versions == 0) throw UsageError("versions must be at least 1");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw UsageError("mutation rate must be within [0, 1]");
  if (regime == Regime::shift && shift_offset > file_size) throw UsageError("shift offset lies beyond the file size");
}

std::size_t SyntheticSpec::files_per_base() const noexcept {
  switch (regime) {
    case Regime::random: return 1;
    case Regime::duplicate: return duplication;
    case Regime::shift: return 2;
    case Regime::versioned: return versions;
  }
  return 1;
}

std::optional<double> SyntheticSpec::ideal_savings_pct() const {
  const double copies = static_cast<double>(files_per_base());
  switch (regime) {
    case Regime::random: return 0.0;
    case Regime::duplicate: return 100.0 * (copies - 1.0) / copies;
    case Regime::versioned:
      if (mutation_rate == 0.0) return 100.0 * (copies - 1.0) / copies;
      return std::nullopt;
    case Regime::shift:
      if (shift_bytes == 0) return 50.0;
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> synthetic_random_bytes(std::uint64_t seed, std::uint64_t index, std::uint64_t size) {
  auto rng = seeded(seed, index, kBytes);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(size));
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t v = rng();
    for (int b = 0; b < 8 && i < out.size(); ++b, v >>= 8) out[i++] = static_cast<std::uint8_t>(v);
  }
  return out;
}

void for_each_synthetic_file(const SyntheticSpec& spec,
                             const std::function<void(const std::string& name, ByteSpan bytes)>& emit) {
  spec.validate();
  for (std::size_t base = 0; base < spec.file_count; ++base) {
    std::vector<std::uint8_t> bytes = synthetic_random_bytes(spec.seed, base, spec.file_size);
    emit(file_name(base, 0), bytes);
    switch (spec.regime) {
      case Regime::random: break;
      case Regime::duplicate:
        for (unsigned copy = 1; copy < spec.duplication; ++copy) emit(file_name(base, copy), bytes);
        break;
      case Regime::shift: {
        std::vector<std::uint8_t> shifted;
        shifted.reserve(bytes.size() + spec.shift_bytes);
        shifted.insert(shifted.end(), bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(spec.shift_offset));
        shifted.insert(shifted.end(), static_cast<std::size_t>(spec.shift_bytes), spec.shift_byte);
        shifted.insert(shifted.end(), bytes.begin() + static_cast<std::ptrdiff_t>(spec.shift_offset), bytes.end());
        emit(file_name(base, 1), shifted);
        break;
      }
      case Regime::versioned:
        for (unsigned v = 1; v < spec.versions; ++v) {
          mutate(bytes, spec.mutation_rate, spec.seed, base, v);
          emit(file_name(base, v), bytes);
        }
        break;
    }
  }
}

fs::path manifest_path(const fs::path& corpus_dir) {
  fs::path dir = corpus_dir;
  if (!dir.has_filename()) dir = dir.parent_path();
  return fs::path(dir.string() + ".manifest.json");
}

GeneratedCorpus gen_synthetic(const SyntheticSpec& spec, const fs::path& out_dir) {
  spec.validate();
  GeneratedCorpus result;
  result.directory = out_dir;
  result.manifest = manifest_path(out_dir);

  std::error_code ec;
  bool created_dir = false;
  if (fs::exists(out_dir, ec)) {
    if (!fs::is_directory(out_dir, ec) || !fs::is_empty(out_dir, ec)) {
      throw IoError("output " + out_dir.string() + " exists and is not an empty directory");
    }
  } else {
    created_dir = fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }

  std::vector<fs::path> written;
  const auto cleanup = [&] {
    std::error_code ignore;
    for (const auto& p : written) fs::remove(p, ignore);
    fs::remove(result.manifest, ignore);
    if (created_dir) fs::remove(out_dir, ignore);
  };

  try {
    for_each_synthetic_file(spec, [&](const std::string& name, ByteSpan bytes) {
      const fs::path path = out_dir / name;
      written.push_back(path);
      std::ofstream out(path, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      out.close();
      if (!out) throw IoError("failed writing " + path.string() + " (disk full?)");
      result.files.push_back({name, bytes.size(), murmur3_x64_128(bytes, kFingerprintSeed).hex()});
    });

    nlohmann::ordered_json m;
    m["format"] = "vchunk-corpus-manifest/1";
    m["spec"] = {{"regime", std::string(to_string(spec.regime))},
                 {"seed", spec.seed},
                 {"file_count", spec.file_count},
                 {"file_size", spec.file_size},
                 {"duplication", spec.duplication},
                 {"shift_bytes", spec.shift_bytes},
                 {"shift_offset", spec.shift_offset},
                 {"shift_byte", spec.shift_byte},
                 {"mutation_rate", spec.mutation_rate},
                 {"versions", spec.versions}};
    const auto ideal = spec.ideal_savings_pct();
    m["ideal_savings_pct"] = ideal ? nlohmann::ordered_json(*ideal) : nlohmann::ordered_json(nullptr);
    std::uint64_t total = 0;
    auto files = nlohmann::ordered_json::array();
    for (const auto& f : result.files) {
      files.push_back({{"name", f.name}, {"size", f.size}, {"digest", f.digest}});
      total += f.size;
    }
    m["total_bytes"] = total;
    m["files"] = std::move(files);

    std::ofstream out(result.manifest, std::ios::binary);
    out << m.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("failed writing manifest " + result.manifest.string());
  } catch (const IoError&) {
    cleanup();
    throw;
  } catch (const std::exception& e) {
    cleanup();
    throw IoError(e.what());
  }
  return result;
}

}  // namespace vchunk
