#ifndef DOMAINSCOPE_HASH_HPP
#define DOMAINSCOPE_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace domainscope {

/// FNV-1a over bytes; serialization-stable content fingerprint.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes);

/// Hash of a file's contents ("fnv1a64:<hex>"). Throws on I/O failure.
std::string hash_file(const std::string& path);

}  // namespace domainscope

#endif  // DOMAINSCOPE_HASH_HPP
