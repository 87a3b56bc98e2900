#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace copolymer {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for task `index` under `root`. Stable across runs and thread counts.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Stream seed for a named task path such as "collapse/a=0.25".
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : path) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(root, h);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Uniform on the open interval (0, 1).
template <class URBG>
double uniform_open(URBG& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0) u = dist(rng);
  return u;
}

template <class URBG>
double standard_normal(URBG& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

template <class URBG>
int fair_coin(URBG& rng) {
  return static_cast<int>(rng() >> 63);
}

}  // namespace copolymer
