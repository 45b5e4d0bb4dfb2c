#include "vchunk/engine.hpp"

#include <bit>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels.hpp"
#include "vchunk/errors.hpp"

namespace vchunk {
namespace {

EngineDescriptor make(EngineId id, unsigned width, bool native_mask) { return {id, width, native_mask}; }

std::string_view id_name(EngineId id) {
  switch (id) {
    case EngineId::scalar: return "scalar";
    case EngineId::v128: return "v128";
    case EngineId::v256: return "v256";
    case EngineId::v512: return "v512";
  }
  return "scalar";
}

// VCHUNK_HIDE_ENGINES=v512,v256 makes detection behave as on a narrower host.
bool hidden(EngineId id) {
  if (id == EngineId::scalar) return false;
  const char* env = std::getenv("VCHUNK_HIDE_ENGINES");
  if (env == nullptr) return false;
  std::string_view list(env);
  const std::string_view name = id_name(id);
  while (!list.empty()) {
    const auto comma = list.find(',');
    if (list.substr(0, comma) == name) return true;
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return false;
}

#if defined(VCHUNK_X86_KERNELS)
bool cpu_has(EngineId id) {
  __builtin_cpu_init();
  switch (id) {
    case EngineId::scalar: return true;
    case EngineId::v128: return __builtin_cpu_supports("sse2");
    case EngineId::v256: return __builtin_cpu_supports("avx2");
    case EngineId::v512: return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512bw");
  }
  return false;
}
#else
bool cpu_has(EngineId id) { return id == EngineId::scalar || id == EngineId::v128; }
#endif

bool host_has(EngineId id) { return cpu_has(id) && !hidden(id); }

EngineDescriptor describe(EngineId id) {
  switch (id) {
    case EngineId::scalar: return make(id, 1, true);
#if defined(VCHUNK_X86_KERNELS)
    case EngineId::v128: return make(id, 16, true);
#else
    case EngineId::v128: return make(id, 16, false);
#endif
    case EngineId::v256: return make(id, 32, true);
    case EngineId::v512: return make(id, 64, true);
  }
  return make(EngineId::scalar, 1, true);
}

std::string available_list() {
  std::string out;
  for (const auto& e : detect_engines()) {
    if (!out.empty()) out += ", ";
    out += e.name();
  }
  return out;
}

}  // namespace

namespace kernels {

const KernelTable& table_for(const EngineDescriptor& engine) {
  if (!engine.has_native_mask_extract && engine.id == EngineId::v128) return generic128_kernels;
  switch (engine.id) {
    case EngineId::scalar: return scalar_kernels;
#if defined(VCHUNK_X86_KERNELS)
    case EngineId::v128: return sse2_kernels;
    case EngineId::v256: return avx2_kernels;
    case EngineId::v512: return avx512_kernels;
#else
    case EngineId::v128: return generic128_kernels;
    default: break;
#endif
  }
  throw EngineUnavailableError("engine '" + std::string(engine.name()) + "' is not compiled into this build");
}

}  // namespace kernels

std::string_view EngineDescriptor::name() const noexcept { return id_name(id); }

EngineDescriptor scalar_engine() noexcept { return make(EngineId::scalar, 1, true); }

EngineDescriptor emulated_mask_engine() noexcept { return make(EngineId::v128, 16, false); }

std::vector<EngineDescriptor> detect_engines() {
  std::vector<EngineDescriptor> found;
  for (EngineId id : {EngineId::v512, EngineId::v256, EngineId::v128}) {
    if (host_has(id)) found.push_back(describe(id));
  }
  found.push_back(scalar_engine());
  return found;
}

EngineDescriptor select_engine(std::string_view name) {
  if (name == "auto") return detect_engines().front();
  for (EngineId id : {EngineId::v512, EngineId::v256, EngineId::v128, EngineId::scalar}) {
    if (describe(id).name() != name) continue;
    if (!host_has(id)) {
      throw EngineUnavailableError("engine '" + std::string(name) +
                                   "' is not supported on this host; available: " + available_list());
    }
    return describe(id);
  }
  throw UsageError("unknown engine '" + std::string(name) + "'; valid: auto, v512, v256, v128, scalar");
}

std::string_view to_string(Comparator cmp) noexcept {
  switch (cmp) {
    case Comparator::gt: return "GT";
    case Comparator::geq: return "GEQ";
    case Comparator::lt: return "LT";
    case Comparator::leq: return "LEQ";
    case Comparator::eq: return "EQ";
  }
  return "?";
}

std::string_view to_string(ExtremeMode mode) noexcept { return mode == ExtremeMode::max ? "MAX" : "MIN"; }

ExtremeByte extreme_byte_search(const EngineDescriptor& engine, ByteSpan region, ExtremeMode mode) {
  if (region.empty()) throw std::invalid_argument("empty region");
  ExtremeByte out;
  out.value = kernels::table_for(engine).extreme(region.data(), region.size(), mode, &out.position);
  return out;
}

std::optional<std::size_t> range_scan(const EngineDescriptor& engine, ByteSpan region, std::uint8_t target,
                                      Comparator cmp) {
  if (region.empty()) return std::nullopt;
  const std::size_t at = kernels::table_for(engine).scan(region.data(), region.size(), target, cmp);
  if (at == region.size()) return std::nullopt;
  return at;
}

std::optional<unsigned> mask_first_index(std::uint64_t mask, unsigned width) noexcept {
  if (width < 64) mask &= (std::uint64_t{1} << width) - 1;
  if (mask == 0) return std::nullopt;
  return static_cast<unsigned>(std::countr_zero(mask));
}

std::uint16_t emulated_mask_extract(std::span<const std::uint8_t, 16> lanes) noexcept {
  return kernels::generic128_mask_extract(lanes.data());
}

}  // namespace vchunk
