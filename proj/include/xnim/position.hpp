#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

namespace xnim {

using Pile = std::uint32_t;

inline constexpr std::size_t kMaxPiles = 8;

// A game state: n pile sizes kept in non-decreasing order. Piles are
// interchangeable, so the sorted tuple is the position's identity.
class Position {
 public:
  Position() = default;

  Position(std::initializer_list<Pile> raw) { assign(raw.begin(), raw.end()); }

  explicit Position(std::span<const Pile> raw) { assign(raw.begin(), raw.end()); }

  // Caller guarantees `sorted` is non-decreasing; used by hot enumeration loops.
  static Position from_sorted(std::span<const Pile> sorted) {
    Position p;
    p.set_size(sorted.size());
    std::copy(sorted.begin(), sorted.end(), p.piles_.begin());
    return p;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  Pile operator[](std::size_t i) const noexcept { return piles_[i]; }

  std::span<const Pile> piles() const noexcept { return {piles_.data(), size_}; }
  const Pile* begin() const noexcept { return piles_.data(); }
  const Pile* end() const noexcept { return piles_.data() + size_; }

  // Largest pile (the leader); 0 for an empty tuple.
  Pile leader() const noexcept { return size_ == 0 ? 0 : piles_[size_ - 1]; }

  std::uint64_t total() const noexcept {
    return std::accumulate(begin(), end(), std::uint64_t{0});
  }

  std::string to_string(char sep = ',') const {
    std::string out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (i) out += sep;
      out += std::to_string(piles_[i]);
    }
    return out;
  }

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position& a, const Position& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  template <class It>
  void assign(It first, It last) {
    set_size(static_cast<std::size_t>(std::distance(first, last)));
    std::copy(first, last, piles_.begin());
    std::sort(piles_.begin(), piles_.begin() + size_);
  }

  void set_size(std::size_t n) {
    if (n > kMaxPiles) throw std::invalid_argument("too many piles (max 8)");
    size_ = static_cast<std::uint8_t>(n);
  }

  std::array<Pile, kMaxPiles> piles_{};
  std::uint8_t size_ = 0;
};

// The reduced game sees the same tuple with one copy of the leader removed.
using ReducedPosition = Position;

inline Position canonicalize(std::span<const Pile> raw) { return Position(raw); }

inline ReducedPosition reduce(const Position& x) {
  if (x.size() < 2) throw std::invalid_argument("reduce needs at least two piles");
  return Position::from_sorted(x.piles().first(x.size() - 1));
}

// Parses "a,b,c" (spaces tolerated) into a canonical position.
inline Position parse_position(const std::string& text) {
  std::array<Pile, kMaxPiles> raw{};
  std::size_t n = 0;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string::npos) j = text.size();
    std::string field = text.substr(i, j - i);
    field.erase(std::remove(field.begin(), field.end(), ' '), field.end());
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed position '" + text + "'");
    if (n == kMaxPiles) throw std::invalid_argument("too many piles in '" + text + "'");
    unsigned long v = std::stoul(field);
    if (v > 0xFFFFFFFFul) throw std::invalid_argument("pile too large in '" + text + "'");
    raw[n++] = static_cast<Pile>(v);
    i = j + 1;
  }
  return Position(std::span<const Pile>(raw.data(), n));
}

}  // namespace xnim
