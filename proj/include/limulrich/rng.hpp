#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace limulrich {

// splitmix64 step; used to derive independent seeds from (user seed, tag).
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic stream: same (seed, tag, salt) gives the same draws on every
// platform (mt19937_64 is fully specified by the standard).
class SeededRng {
 public:
  SeededRng(uint64_t seed, std::string_view tag, uint64_t salt = 0)
      : eng_(splitmix64(seed ^ splitmix64(fnv1a(tag) + salt))) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform-enough residue draw; the tiny modulo bias is irrelevant for
  // genericity sampling, determinism is what matters here.
  uint32_t below(uint32_t n) { return static_cast<uint32_t>(eng_() % n); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace limulrich
