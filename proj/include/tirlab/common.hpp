#pragma once

#include <cctype>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace tirlab {

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// Independent deterministic stream per (seed, step, tag). seed_seq only keeps
// 32 bits per entry, so wide values are split.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t step,
                                std::string_view tag) {
  const std::uint64_t h = fnv1a(tag);
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
      static_cast<std::uint32_t>(h),    static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// Uniform in [0,1) straight from the raw 64-bit output. Keeps sampling
// independent of the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace tirlab
