#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sitewatch {

// FNV-1a; stable across platforms and runs (std::hash is not).
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

}  // namespace sitewatch
