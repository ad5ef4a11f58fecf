#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace edgestat {

/// Revolving-door order of the t-subsets of {0, ..., n-1} (Knuth, Algorithm 7.2.1.3R).
/// Consecutive combinations differ by removing one element and adding another.
class RevolvingDoor {
 public:
  struct Swap {
    unsigned out;
    unsigned in;
  };

  RevolvingDoor(unsigned n, unsigned t) : n_(n), t_(t), c_(t + 2) {
    for (unsigned j = 1; j <= t; ++j) c_[j] = j - 1;
    c_[t + 1] = n;
    done_ = t > n;
  }

  /// Current combination, ascending (c_1 < ... < c_t).
  std::vector<unsigned> current() const { return {c_.begin() + 1, c_.begin() + 1 + t_}; }
  bool valid() const { return !done_; }

  /// Advance; returns the element swap, or nullopt after the last combination.
  std::optional<Swap> next() {
    if (done_) return std::nullopt;
    if (t_ == 0 || t_ == n_) return finish();
    unsigned j;
    if (t_ % 2 == 1) {
      if (c_[1] + 1 < c_[2]) {
        ++c_[1];
        return Swap{c_[1] - 1, c_[1]};
      }
      j = 2;
      goto r4;
    } else {
      if (c_[1] > 0) {
        --c_[1];
        return Swap{c_[1] + 1, c_[1]};
      }
      j = 2;
      goto r5;
    }
  r4:
    if (j > t_) return finish();
    if (c_[j] >= j) {
      unsigned out = c_[j];
      c_[j] = c_[j - 1];
      c_[j - 1] = j - 2;
      return Swap{out, j - 2};
    }
    ++j;
  r5:
    if (j > t_) return finish();
    if (c_[j] + 1 < c_[j + 1]) {
      unsigned out = j - 2;
      c_[j - 1] = c_[j];
      ++c_[j];
      return Swap{out, c_[j]};
    }
    ++j;
    goto r4;
  }

 private:
  std::optional<Swap> finish() {
    done_ = true;
    return std::nullopt;
  }

  unsigned n_, t_;
  std::vector<unsigned> c_;
  bool done_ = false;
};

}  // namespace edgestat
