#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cxorder {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Used only to derive well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combines a seed with a stream coordinate.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// FNV-1a, for folding textual keys into seeds.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Engine for Monte Carlo trial `stream` of a run seeded with `seed`.
/// Every trial owns its engine, so results do not depend on scheduling.
inline Engine stream_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

/// Uniform draw on the open interval (0, 1) from the top 53 bits of one
/// engine output. Exactly one engine call per variate.
inline double uniform_open(Engine& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Seed from the environment's entropy source, for runs without --seed.
inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace cxorder
