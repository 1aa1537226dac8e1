#pragma once

#include <cstdint>

namespace frog::rng {

// Counter-based random streams. Every draw is a pure function of
// (master seed, stream tag, origin label hash, frog index, step counter),
// so adding or removing frogs never perturbs the draws of any other frog.

enum class Tag : std::uint64_t {
  Move = 0x9d8a7c6b5e4f3a21ULL,
  Death = 0x71c3b2a19e8d7f05ULL,
  Count = 0x3fb9e8d7c6a51b2dULL,
  Generic = 0x5ce6d4b3a2918f07ULL,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

inline std::uint64_t draw(std::uint64_t seed, Tag tag, std::uint64_t origin,
                          std::uint64_t index, std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(tag));
  h = splitmix64(h ^ origin);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ counter);
  return h;
}

// Uniform in [0,1).
inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, Tag tag, std::uint64_t origin,
                      std::uint64_t index, std::uint64_t counter) {
  return to_unit(draw(seed, tag, origin, index, counter));
}

// Uniform integer in [0, n).
inline std::size_t choice(std::uint64_t seed, Tag tag, std::uint64_t origin,
                          std::uint64_t index, std::uint64_t counter,
                          std::size_t n) {
  double u = uniform(seed, tag, origin, index, counter);
  auto k = static_cast<std::size_t>(u * static_cast<double>(n));
  return k >= n ? n - 1 : k;
}

inline std::uint64_t hash_string(const char* s, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(s[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace frog::rng
