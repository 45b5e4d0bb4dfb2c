#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vchunk {

/// Bad flag values, unknown algorithm/engine names, malformed configs.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EngineUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::uint64_t offset = 0)
      : std::runtime_error(what), offset_(offset) {}

  /// Stream offset reached when the failure happened.
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vchunk

namespace vchunk {

/// A recipe names a chunk the store does not hold.
class MissingFingerprintError : public VerificationError {
 public:
  MissingFingerprintError(const std::string& fingerprint, std::size_t position)
      : VerificationError("missing fingerprint " + fingerprint + " at recipe position " + std::to_string(position)),
        fingerprint_(fingerprint),
        position_(position) {}

  const std::string& fingerprint() const noexcept { return fingerprint_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string fingerprint_;
  std::size_t position_;
};

}  // namespace vchunk
