#pragma once

#include <cstdint>
#include <string_view>

namespace dyncon {

/// 64-bit FNV-1a; stable across platforms, used for trace digests.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace dyncon
