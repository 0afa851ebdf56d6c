#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "protoglyph/types.hpp"

namespace protoglyph {

// splitmix64 finalizer; full avalanche, used both for key mixing and as the
// per-stream generator so every (seed, phase, epoch, index) tuple maps to an
// independent deterministic stream regardless of worker scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

// Stream tags keep the rng domains of unrelated components disjoint.
namespace rng_tag {
constexpr std::uint64_t init = 0xA11CE;
constexpr std::uint64_t train = 1;
constexpr std::uint64_t val = 2;
constexpr std::uint64_t test = 3;
constexpr std::uint64_t mixup = 4;
constexpr std::uint64_t dropout = 5;
constexpr std::uint64_t subsample = 6;
constexpr std::uint64_t dataset = 7;
}  // namespace rng_tag

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : state_(mix64(key ^ 0x5bf03635ULL)) {}

  static RngStream keyed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t k = 0x243f6a8885a308d3ULL;
    for (std::uint64_t p : parts) k = combine_keys(k, p);
    return RngStream(k);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Unbiased integer in [0, n) via rejection; portable across platforms.
  Index below(Index n) {
    if (n <= 0) throw std::invalid_argument("RngStream::below: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return static_cast<Index>(r % un);
  }

  double next_gaussian() {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // First k entries of a uniformly random permutation of 0..n-1.
  std::vector<Index> sample_without_replacement(Index n, Index k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < k; ++i) {
      const Index j = i + below(n - i);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (Index i = static_cast<Index>(v.size()) - 1; i > 0; --i) {
      const Index j = below(i + 1);
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace protoglyph
