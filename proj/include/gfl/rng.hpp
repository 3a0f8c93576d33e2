#pragma once

#include <cstdint>
#include <random>

namespace gfl {

// splitmix64 finalizer; decorrelates seed/tag pairs before feeding mt19937_64.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream for (seed, tag). Same inputs give a bit-identical stream.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(tag ^ 0xa5a5a5a5deadbeefULL)));
}

}  // namespace gfl
