#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ntkit {

using Rng = std::mt19937_64;

// splitmix64 mixing step; used to derive independent stream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// All randomness flows master seed -> stage tag -> item index. Streams derived
// this way are independent of scheduling, which is what makes threaded runs
// byte-reproducible.
inline uint64_t derive_seed(uint64_t master, uint64_t stage, uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stage) ^ index);
}

// 53-bit mantissa draw; identical across standard libraries (the distribution
// objects in <random> are not portable).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t sample_discrete(const std::vector<double>& probs, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

}  // namespace ntkit
