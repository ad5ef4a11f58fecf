#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "edgestat/exact.hpp"

namespace edgestat {

/// Philox4x32-10 block function (Salmon et al., Random123).
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
    std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Counter-mode stream: key = seed, counter = (block index, stream id).
/// Distinct stream ids give independent, jump-free substreams.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t lo = next_u32();
    return lo | (std::uint64_t(next_u32()) << 32);
  }

  /// Uniform integer in [0, bound), bound >= 1, without modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject_under = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= reject_under) return x % bound;
    }
  }

  /// Exact Bernoulli(p) for rational p with a 64-bit denominator.
  bool bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    std::uint64_t den = to_u64(p.get_den());
    std::uint64_t num = to_u64(p.get_num());
    return below(den) < num;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform k-subset of {0, ..., n-1} (Floyd), returned sorted.
  std::vector<Vertex> k_subset(std::uint64_t n, std::uint64_t k) {
    std::vector<Vertex> s;
    s.reserve(k);
    for (std::uint64_t j = n - k; j < n; ++j) {
      auto t = static_cast<Vertex>(below(j + 1));
      if (std::find(s.begin(), s.end(), t) != s.end()) s.push_back(static_cast<Vertex>(j));
      else s.push_back(t);
    }
    std::sort(s.begin(), s.end());
    return s;
  }

 private:
  void refill() {
    buf_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace edgestat
