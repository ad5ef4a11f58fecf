#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgestat {

using Vertex = std::uint32_t;
using u128 = unsigned __int128;

/// Hard limit for every bitmask-based operation.
inline constexpr std::size_t kMaxBitmaskVertices = 128;

/// Malformed or out-of-range input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Work above a configured ceiling; the message carries a cost estimate.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hypotheses of the requested statement do not hold for these parameters.
class InapplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fixed-width vertex set over 0..127.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(u128 bits) : bits_(bits) {}

  VertexSet(std::initializer_list<Vertex> vs) {
    for (Vertex v : vs) insert(v);
  }

  template <class Range>
  static VertexSet of(const Range& r) {
    VertexSet s;
    for (auto v : r) s.insert(static_cast<Vertex>(v));
    return s;
  }

  /// {0, ..., n-1}
  static constexpr VertexSet prefix(std::size_t n) {
    if (n >= 128) return VertexSet(~u128(0));
    return VertexSet((u128(1) << n) - 1);
  }

  static constexpr VertexSet single(Vertex v) { return VertexSet(u128(1) << v); }

  constexpr u128 bits() const { return bits_; }
  constexpr std::uint64_t lo() const { return static_cast<std::uint64_t>(bits_); }
  constexpr std::uint64_t hi() const { return static_cast<std::uint64_t>(bits_ >> 64); }

  void insert(Vertex v) {
    if (v >= kMaxBitmaskVertices) throw InputError("vertex " + std::to_string(v) + " exceeds bitmask ceiling");
    bits_ |= u128(1) << v;
  }
  constexpr void erase(Vertex v) { bits_ &= ~(u128(1) << v); }
  constexpr void toggle(Vertex v) { bits_ ^= u128(1) << v; }
  constexpr bool contains(Vertex v) const { return v < 128 && ((bits_ >> v) & 1); }

  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(lo()) + std::popcount(hi()));
  }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool subset_of(VertexSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(VertexSet o) const { return (bits_ & o.bits_) != 0; }

  /// Smallest element; undefined on the empty set.
  constexpr Vertex lowest() const {
    return lo() ? static_cast<Vertex>(std::countr_zero(lo())) : static_cast<Vertex>(64 + std::countr_zero(hi()));
  }
  constexpr Vertex highest() const {
    return hi() ? static_cast<Vertex>(127 - std::countl_zero(hi())) : static_cast<Vertex>(63 - std::countl_zero(lo()));
  }

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t w = lo(); w; w &= w - 1) f(static_cast<Vertex>(std::countr_zero(w)));
    for (std::uint64_t w = hi(); w; w &= w - 1) f(static_cast<Vertex>(64 + std::countr_zero(w)));
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(size());
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.bits_ | b.bits_); }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & b.bits_); }
  friend constexpr VertexSet operator^(VertexSet a, VertexSet b) { return VertexSet(a.bits_ ^ b.bits_); }
  friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & ~b.bits_); }
  VertexSet& operator|=(VertexSet o) { bits_ |= o.bits_; return *this; }
  VertexSet& operator&=(VertexSet o) { bits_ &= o.bits_; return *this; }
  VertexSet& operator-=(VertexSet o) { bits_ &= ~o.bits_; return *this; }

  friend constexpr bool operator==(VertexSet, VertexSet) = default;
  friend constexpr std::strong_ordering operator<=>(VertexSet a, VertexSet b) { return a.bits_ <=> b.bits_; }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](Vertex v) {
      if (!first) s += ',';
      s += std::to_string(v);
      first = false;
    });
    return s + "}";
  }

 private:
  u128 bits_ = 0;
};

struct VertexSetHash {
  std::size_t operator()(VertexSet s) const noexcept {
    std::uint64_t x = s.lo() * 0x9E3779B97F4A7C15ULL ^ (s.hi() + 0x632BE59BD9B4E019ULL + (s.lo() << 6));
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};

}  // namespace edgestat
