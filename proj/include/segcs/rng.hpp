#pragma once

#include <cstdint>
#include <random>

namespace segcs {

/// Purposes that get their own independent random stream.
enum class Stream : std::uint64_t {
  matrix = 1,
  signal = 2,
  noise = 3,
  trial = 4,
  extension_noise = 5,
};

/// SplitMix64 finalizer; a bijective mix of all 64 input bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of stream `purpose`/`index` from a root seed.
///
/// The split is `mix64(mix64(mix64(root) ^ purpose) ^ index)`. Distinct
/// (purpose, index) pairs give unrelated seeds, so trials can be evaluated in
/// any order or concurrently and still reproduce bit-for-bit.
constexpr std::uint64_t derive_seed(std::uint64_t root, Stream purpose, std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(root) ^ static_cast<std::uint64_t>(purpose)) ^ index);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t root, Stream purpose, std::uint64_t index = 0) {
  return Engine(derive_seed(root, purpose, index));
}

}  // namespace segcs
