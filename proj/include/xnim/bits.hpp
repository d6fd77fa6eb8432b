#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "xnim/position.hpp"

namespace xnim {

// Binary matrix with one row per pile; column j holds bit j (LSB first).
struct BoutonMatrix {
  std::vector<Pile> rows;
  unsigned width = 1;

  std::size_t row_count() const noexcept { return rows.size(); }

  bool bit(std::size_t row, unsigned column) const noexcept {
    return column < 32 && ((rows[row] >> column) & 1u);
  }

  // Column j as a mask over rows (bit i set iff row i has bit j).
  std::uint32_t column(unsigned j) const noexcept {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (bit(i, j)) mask |= 1u << i;
    return mask;
  }

  // Columns 0..width-1; columns past the matrix's own width read as zero.
  std::vector<std::uint32_t> columns(unsigned padded_width) const {
    std::vector<std::uint32_t> out(padded_width);
    for (unsigned j = 0; j < padded_width; ++j) out[j] = column(j);
    return out;
  }

  friend bool operator==(const BoutonMatrix&, const BoutonMatrix&) = default;
};

struct MooreVector {
  std::vector<unsigned> sums;

  friend bool operator==(const MooreVector&, const MooreVector&) = default;
};

inline BoutonMatrix bouton_matrix(const Position& x) {
  BoutonMatrix m;
  m.rows.assign(x.begin(), x.end());
  m.width = std::max(1u, static_cast<unsigned>(std::bit_width(x.leader())));
  return m;
}

inline MooreVector moore_vector(const BoutonMatrix& m) {
  MooreVector v;
  v.sums.resize(m.width);
  for (unsigned j = 0; j < m.width; ++j) v.sums[j] = static_cast<unsigned>(std::popcount(m.column(j)));
  return v;
}

inline MooreVector moore_vector(const Position& x) { return moore_vector(bouton_matrix(x)); }

// Integer whose bit k is set iff column k sums to w.
inline std::uint64_t xi(const MooreVector& m, unsigned w) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < m.sums.size() && k < 64; ++k)
    if (m.sums[k] == w) out |= std::uint64_t{1} << k;
  return out;
}

// True iff the two matrices (same row count, padded to a common width) have
// the same multiset of columns but not the same column sequence.
inline bool is_column_permutation(const BoutonMatrix& a, const BoutonMatrix& b) {
  if (a.row_count() != b.row_count()) return false;
  const unsigned w = std::max(a.width, b.width);
  auto ca = a.columns(w);
  auto cb = b.columns(w);
  if (ca == cb) return false;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

// Inserts an all-zero column at index p: bits below p stay, bits at or above
// p move up by one.
inline std::uint64_t insert_zero_column(std::uint64_t v, unsigned p) {
  if (p >= 63) return v;
  const std::uint64_t low = v & ((std::uint64_t{1} << p) - 1);
  return low | ((v >> p) << (p + 1));
}

// Column indices p at which inserting a zero column into `a` yields `b`
// (row by row). Insertions above the top set bit leave values unchanged and
// are never reported.
inline std::vector<unsigned> zero_column_insertions(const BoutonMatrix& a, const BoutonMatrix& b) {
  std::vector<unsigned> out;
  if (a.row_count() != b.row_count()) return out;
  Pile top = 0;
  for (Pile r : a.rows) top = std::max(top, r);
  const unsigned used = static_cast<unsigned>(std::bit_width(top));
  for (unsigned p = 0; p < used; ++p) {
    bool match = true;
    for (std::size_t i = 0; i < a.row_count() && match; ++i)
      match = insert_zero_column(a.rows[i], p) == b.rows[i];
    if (match) out.push_back(p);
  }
  return out;
}

}  // namespace xnim
