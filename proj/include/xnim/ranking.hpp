#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "xnim/error.hpp"
#include "xnim/position.hpp"

namespace xnim {

// Largest supported pile bound. Keeps pile values and remoteness in 16 bits.
inline constexpr Pile kMaxBound = 65535;

// Dense bijection between non-decreasing n-tuples over {0..bound} and
// [0, C(bound+n, n)), using the colexicographic combinatorial number system:
// the sorted tuple x maps to the strictly increasing y_i = x_i + i, and
// rank(x) = sum_i C(y_i, i+1).
class RankedIndex {
 public:
  RankedIndex() = default;

  RankedIndex(std::size_t n, Pile bound) : n_(n), bound_(bound) {
    if (n > kMaxPiles) throw std::invalid_argument("RankedIndex: n exceeds 8");
    if (bound > kMaxBound) throw std::invalid_argument("RankedIndex: bound exceeds 65535");
    const std::size_t rows = static_cast<std::size_t>(bound) + n + 1;
    binom_.assign(rows * (n + 1), 0);
    constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t v = 0; v < rows; ++v) {
      binom_[v * (n + 1)] = 1;
      for (std::size_t i = 1; i <= n; ++i) {
        if (v == 0) continue;
        const std::uint64_t a = binom_[(v - 1) * (n + 1) + i - 1];
        const std::uint64_t b = binom_[(v - 1) * (n + 1) + i];
        binom_[v * (n + 1) + i] = (a > kSaturated - b) ? kSaturated : a + b;
      }
    }
    total_ = binom_[(rows - 1) * (n + 1) + n];
    if (total_ == kSaturated) throw ResourceError("RankedIndex: position count overflows 64 bits");
  }

  std::size_t n() const noexcept { return n_; }
  Pile bound() const noexcept { return bound_; }
  std::uint64_t total() const noexcept { return total_; }

  // C(v, i) for v <= bound + n, i <= n.
  std::uint64_t binom(std::size_t v, std::size_t i) const noexcept {
    return binom_[v * (n_ + 1) + i];
  }

  bool contains(const Position& x) const noexcept {
    return x.size() == n_ && (n_ == 0 || x.leader() <= bound_);
  }

  std::uint64_t rank(const Position& x) const {
    if (x.size() != n_)
      throw std::out_of_range("rank: position has " + std::to_string(x.size()) +
                              " piles, index expects " + std::to_string(n_));
    if (!contains(x))
      throw std::out_of_range("rank: pile exceeds bound " + std::to_string(bound_));
    return rank_unchecked(x.begin());
  }

  // `sorted` points at n non-decreasing values, each <= bound.
  std::uint64_t rank_unchecked(const Pile* sorted) const noexcept {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < n_; ++i) r += binom_[(sorted[i] + i) * (n_ + 1) + i + 1];
    return r;
  }

  Position unrank(std::uint64_t r) const {
    if (r >= total_)
      throw std::out_of_range("unrank: rank " + std::to_string(r) + " out of range [0, " +
                              std::to_string(total_) + ")");
    std::array<Pile, kMaxPiles> out{};
    std::size_t hi = static_cast<std::size_t>(bound_) + n_ - 1;  // y_{n-1} <= bound + n - 1
    for (std::size_t i = n_; i-- > 0;) {
      // largest y in [i, hi] with C(y, i+1) <= r
      std::size_t lo = i, top = hi;
      while (lo < top) {
        std::size_t mid = lo + (top - lo + 1) / 2;
        if (binom(mid, i + 1) <= r)
          lo = mid;
        else
          top = mid - 1;
      }
      r -= binom(lo, i + 1);
      out[i] = static_cast<Pile>(lo - i);
      hi = lo == 0 ? 0 : lo - 1;
    }
    return Position::from_sorted(std::span<const Pile>(out.data(), n_));
  }

 private:
  std::size_t n_ = 0;
  Pile bound_ = 0;
  std::uint64_t total_ = 1;
  std::vector<std::uint64_t> binom_{1};
};

// Calls f(position) for each sorted n-tuple with piles <= bound summing to
// `stones`. Order: leader descending, recursively.
template <class F>
void for_each_in_layer(std::size_t n, Pile bound, std::uint64_t stones, F&& f) {
  std::array<Pile, kMaxPiles> buf{};
  auto rec = [&](auto&& self, std::size_t slot, std::uint64_t left, Pile cap) -> void {
    if (slot == 0) {
      if (left == 0) f(Position::from_sorted(std::span<const Pile>(buf.data(), n)));
      return;
    }
    const std::size_t filled = slot;  // piles at indices [0, slot) still to choose
    const std::uint64_t lo = (left + filled - 1) / filled;
    const std::uint64_t hi = std::min<std::uint64_t>(cap, left);
    for (std::uint64_t v = hi + 1; v-- > lo;) {
      buf[slot - 1] = static_cast<Pile>(v);
      self(self, slot - 1, left - v, static_cast<Pile>(v));
    }
  };
  if (n == 0) {
    if (stones == 0) f(Position{});
    return;
  }
  rec(rec, n, stones, bound);
}

// Calls f(rank, position) for every position with leader in [lo, hi], in
// increasing rank order. Colex rank grows with the last pile outermost.
template <class F>
void for_each_ranked(const RankedIndex& index, Pile lo, Pile hi, F&& f) {
  const std::size_t n = index.n();
  if (n == 0) {
    f(std::uint64_t{0}, Position{});
    return;
  }
  std::array<Pile, kMaxPiles> buf{};
  std::uint64_t r = index.binom(lo + n - 1, n);  // tuples with leader < lo
  auto rec = [&](auto&& self, std::size_t slot, Pile cap) -> void {
    if (slot == 0) {
      f(r++, Position::from_sorted(std::span<const Pile>(buf.data(), n)));
      return;
    }
    for (Pile v = 0; v <= cap; ++v) {
      buf[slot - 1] = v;
      self(self, slot - 1, v);
    }
  };
  for (Pile top = lo; top <= hi; ++top) {
    buf[n - 1] = top;
    rec(rec, n - 1, top);
  }
}

}  // namespace xnim
