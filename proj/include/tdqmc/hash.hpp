#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace tdqmc {

/// 64-bit FNV-1a; used for config fingerprints, not for security.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace tdqmc
