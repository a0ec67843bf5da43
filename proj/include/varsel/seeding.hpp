#pragma once

#include <cstdint>
#include <random>

namespace varsel {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for an independent random stream. Distinct stream ids under one master
// seed never collide because the finalizer is a bijection.
constexpr std::uint64_t derive_candidate_seed(std::uint64_t master_seed,
                                              std::uint64_t stream_id) noexcept {
  return splitmix64_mix(master_seed ^ (stream_id * 0x9E3779B97F4A7C15ULL));
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return Rng(derive_candidate_seed(master_seed, stream_id));
}

}  // namespace varsel
