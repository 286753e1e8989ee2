#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace textlab {

// SHA-256 (FIPS 180-4). Used for the output manifest so pipeline reruns can
// be audited byte-for-byte.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  // Finalizes and returns lowercase hex digest. Object is spent afterwards.
  std::string hex_digest();

  static std::string of_string(std::string_view s);
  static std::string of_file(const std::string& path);  // throws Error(io)

 private:
  void process_block(const uint8_t* block);
  uint32_t h_[8];
  uint8_t buffer_[64];
  size_t buffer_len_ = 0;
  uint64_t total_bits_ = 0;
};

}  // namespace textlab
