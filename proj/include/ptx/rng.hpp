#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ptx {

/// SplitMix64 finalizer. Used to derive independent stream keys from
/// (seed, counter...) tuples so that every stream is addressable directly.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::initializer_list<std::uint64_t> parts) {
  return Engine{derive_seed(parts)};
}

/// Stream tags keep unrelated consumers of one trial seed apart.
namespace stream {
inline constexpr std::uint64_t filter_bank = 0x46494c54;  // "FILT"
inline constexpr std::uint64_t noise = 0x4e4f4953;        // "NOIS"
inline constexpr std::uint64_t random_arm = 0x52414e44;   // "RAND"
inline constexpr std::uint64_t word_omission = 0x574f4d54;
inline constexpr std::uint64_t trial = 0x5452494c;
}  // namespace stream

}  // namespace ptx
