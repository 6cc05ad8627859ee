#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace remrec {

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits. Stable across
/// platforms, which std::hash is not.
inline std::string config_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace remrec
