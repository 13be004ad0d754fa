// Named random streams. Every random choice in the library is derived from
// one root seed plus a stream label, so runs are reproducible and independent
// of worker count.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stefanlab {

namespace detail {

// FNV-1a, 64 bit. Stable across platforms, good enough for stream labels.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// SplitMix64 finalizer, used to decorrelate seed/label combinations.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic generator for the stream `label` under the root `seed`.
/// Distinct labels give decorrelated streams; the same (seed, label) pair
/// always gives the same sequence.
inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::string_view label) {
  std::uint64_t s = detail::splitmix64(seed ^ detail::fnv1a64(label));
  return std::mt19937_64(s);
}

/// Sub-seed for an indexed member of a family (sweep points, probe fields).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return detail::splitmix64(detail::splitmix64(seed ^ detail::fnv1a64(label)) + index);
}

} // namespace stefanlab
