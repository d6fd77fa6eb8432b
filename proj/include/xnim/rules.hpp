#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "xnim/bits.hpp"
#include "xnim/error.hpp"
#include "xnim/position.hpp"

namespace xnim {

enum class Family : std::uint8_t { nim = 0, moore = 1, exact = 2 };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::nim: return "nim";
    case Family::moore: return "moore";
    case Family::exact: return "exact";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "nim") return Family::nim;
  if (s == "moore") return Family::moore;
  if (s == "exact") return Family::exact;
  throw std::invalid_argument("unknown game family '" + s + "' (expected nim, moore or exact)");
}

// Move semantics: nim(n) reduces one pile, moore(n, <=k) reduces 1..k piles,
// exact(n, =k) reduces exactly k piles. Every reduced pile loses >= 1 stone.
struct GameRule {
  Family family = Family::exact;
  unsigned n = 5;
  unsigned k = 2;

  static GameRule nim(unsigned n) { return make(Family::nim, n, 1); }
  static GameRule moore(unsigned n, unsigned k) { return make(Family::moore, n, k); }
  static GameRule exact(unsigned n, unsigned k) { return make(Family::exact, n, k); }

  static GameRule make(Family family, unsigned n, unsigned k) {
    if (n == 0 || n > kMaxPiles) throw std::invalid_argument("pile count must be in 1..8");
    if (k == 0 || k > n) throw std::invalid_argument("need 0 < k <= n");
    if (family == Family::nim && k != 1) throw std::invalid_argument("nim has k = 1");
    return GameRule{family, n, k};
  }

  unsigned min_arity() const noexcept { return family == Family::exact ? k : 1; }
  unsigned max_arity() const noexcept { return family == Family::nim ? 1 : k; }

  std::string name() const {
    switch (family) {
      case Family::nim: return "nim(" + std::to_string(n) + ")";
      case Family::moore: return "moore(" + std::to_string(n) + ",<=" + std::to_string(k) + ")";
      case Family::exact: return "exact(" + std::to_string(n) + ",=" + std::to_string(k) + ")";
    }
    return "?";
  }

  friend bool operator==(const GameRule&, const GameRule&) = default;
};

struct PileChange {
  unsigned index;  // into the sorted tuple
  Pile to;
};

struct Move {
  std::vector<PileChange> changes;
};

namespace detail {

// Sorts a short array in place; n <= 8.
inline void insertion_sort(Pile* a, std::size_t n) noexcept {
  for (std::size_t i = 1; i < n; ++i) {
    Pile v = a[i];
    std::size_t j = i;
    for (; j > 0 && a[j - 1] > v; --j) a[j] = a[j - 1];
    a[j] = v;
  }
}

// Advances idx[0..j) to the next lexicographic j-combination of [0, n).
inline bool next_combination(std::array<unsigned, kMaxPiles>& idx, unsigned j, unsigned n) noexcept {
  for (unsigned t = j; t-- > 0;) {
    if (idx[t] < n - j + t) {
      ++idx[t];
      for (unsigned u = t + 1; u < j; ++u) idx[u] = idx[u - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Calls f(mask, successor) for every legal move. `mask` has bit i set for each
// reduced pile index. Order: arity ascending, index combinations in
// lexicographic order, then new values ascending with the first chosen pile
// outermost (largest amounts first). The same successor may appear more than
// once when equal piles are involved.
template <class F>
void for_each_move(const GameRule& rule, const Position& x, F&& f) {
  const unsigned n = static_cast<unsigned>(x.size());
  std::array<unsigned, kMaxPiles> idx{};
  std::array<Pile, kMaxPiles> val{};
  std::array<Pile, kMaxPiles> buf{};
  for (unsigned j = rule.min_arity(); j <= rule.max_arity() && j <= n; ++j) {
    for (unsigned t = 0; t < j; ++t) idx[t] = t;
    do {
      bool movable = true;
      std::uint32_t mask = 0;
      for (unsigned t = 0; t < j; ++t) {
        movable = movable && x[idx[t]] > 0;
        mask |= 1u << idx[t];
      }
      if (!movable) continue;
      for (unsigned t = 0; t < j; ++t) val[t] = 0;
      for (;;) {
        std::copy(x.begin(), x.end(), buf.begin());
        for (unsigned t = 0; t < j; ++t) buf[idx[t]] = val[t];
        detail::insertion_sort(buf.data(), n);
        f(mask, Position::from_sorted(std::span<const Pile>(buf.data(), n)));
        // odometer, last chosen pile fastest
        int t = static_cast<int>(j) - 1;
        while (t >= 0 && ++val[t] >= x[idx[t]]) val[t--] = 0;
        if (t < 0) break;
      }
    } while (detail::next_combination(idx, j, n));
  }
}

template <class F>
void for_each_successor(const GameRule& rule, const Position& x, F&& f) {
  for_each_move(rule, x, [&](std::uint32_t, const Position& y) { f(y); });
}

// Distinct successors in first-seen enumeration order.
inline std::vector<Position> successors(const GameRule& rule, const Position& x) {
  std::vector<Position> out;
  std::vector<Position> seen;
  for_each_successor(rule, x, [&](const Position& y) {
    auto it = std::lower_bound(seen.begin(), seen.end(), y);
    if (it != seen.end() && *it == y) return;
    seen.insert(it, y);
    out.push_back(y);
  });
  return out;
}

inline bool is_terminal(const GameRule& rule, const Position& x) {
  const auto nonempty = std::count_if(x.begin(), x.end(), [](Pile p) { return p > 0; });
  return static_cast<unsigned>(nonempty) < rule.min_arity();
}

// True iff y is a legal successor of x: y equals x with some allowed number
// j of piles removed and replaced by j values, each strictly below the pile
// it replaces.
inline bool move_exists_between(const GameRule& rule, const Position& x, const Position& y) {
  const unsigned n = static_cast<unsigned>(x.size());
  if (y.size() != n || n != rule.n) return false;
  std::array<unsigned, kMaxPiles> idx{};
  for (unsigned j = rule.min_arity(); j <= rule.max_arity() && j <= n; ++j) {
    for (unsigned t = 0; t < j; ++t) idx[t] = t;
    do {
      std::array<bool, kMaxPiles> chosen{};
      std::array<Pile, kMaxPiles> removed{};
      for (unsigned t = 0; t < j; ++t) {
        chosen[idx[t]] = true;
        removed[t] = x[idx[t]];
      }
      // replacements = y minus the untouched piles (multiset difference)
      std::array<bool, kMaxPiles> used{};
      bool ok = true;
      for (unsigned i = 0; i < n && ok; ++i) {
        if (chosen[i]) continue;
        ok = false;
        for (unsigned m = 0; m < n; ++m) {
          if (!used[m] && y[m] == x[i]) {
            used[m] = true;
            ok = true;
            break;
          }
        }
      }
      if (!ok) continue;
      std::array<Pile, kMaxPiles> added{};
      unsigned a = 0;
      for (unsigned m = 0; m < n; ++m)
        if (!used[m]) added[a++] = y[m];
      // sorted matching: removed and added are both non-decreasing
      bool dominated = true;
      for (unsigned t = 0; t < j; ++t) dominated = dominated && added[t] < removed[t];
      if (dominated) return true;
    } while (detail::next_combination(idx, j, n));
  }
  return false;
}

// Applies a move given in pile indices of the sorted tuple; throws
// IllegalMoveError naming the violated rule.
inline Position apply_move(const GameRule& rule, const Position& x, const Move& move) {
  const auto count = static_cast<unsigned>(move.changes.size());
  if (count < rule.min_arity() || count > rule.max_arity()) {
    if (rule.family == Family::exact)
      throw IllegalMoveError("a move must reduce exactly " + std::to_string(rule.k) + " piles");
    if (rule.family == Family::nim) throw IllegalMoveError("a move must reduce exactly one pile");
    throw IllegalMoveError("a move must reduce between 1 and " + std::to_string(rule.k) + " piles");
  }
  std::array<Pile, kMaxPiles> buf{};
  std::copy(x.begin(), x.end(), buf.begin());
  std::uint32_t seen = 0;
  for (const auto& c : move.changes) {
    if (c.index >= x.size())
      throw IllegalMoveError("pile index " + std::to_string(c.index + 1) + " does not exist");
    if (seen & (1u << c.index)) throw IllegalMoveError("each pile may be chosen only once");
    seen |= 1u << c.index;
    if (c.to >= x[c.index])
      throw IllegalMoveError("each chosen pile must lose at least one stone");
    buf[c.index] = c.to;
  }
  return Position(std::span<const Pile>(buf.data(), x.size()));
}

// nim: XOR of all piles is zero.
inline bool bouton_is_p(const Position& x) {
  Pile acc = 0;
  for (Pile p : x) acc ^= p;
  return acc == 0;
}

// moore(n, <=k): every column sum is divisible by k + 1.
inline bool moore_is_p(const Position& x, unsigned k) {
  for (unsigned s : moore_vector(x).sums)
    if (s % (k + 1) != 0) return false;
  return true;
}

// exact(5, =2) with an empty pile: P iff the three central piles are equal.
inline bool thm10_is_p(const Position& x) {
  if (x.size() != 5) throw std::invalid_argument("closed form covers five-pile positions only");
  if (x[0] != 0) throw std::invalid_argument("closed form only covers positions with an empty pile");
  return x[1] == x[2] && x[2] == x[3];
}

// Winning move in moore(n, <=k) built by the column-balancing sweep: walk
// columns from the highest unbalanced one down. Rows already lowered at a
// higher column ("changed" rows) may take any bit below it. For column i with
// residue a = sum mod (k+1) and u ones among the t changed rows:
//   a <= u          clear a ones inside the changed rows;
//   t + a - u <= k  clear every changed one plus a - u ones in fresh rows;
//   otherwise       set k + 1 - a zeros inside the changed rows.
// Ties go to the lowest row index.
inline Position moore_winning_move(const Position& x, unsigned k) {
  const BoutonMatrix m = bouton_matrix(x);
  const std::size_t rows = m.row_count();
  const unsigned mod = k + 1;
  int top = -1;
  for (unsigned j = m.width; j-- > 0;) {
    if (std::popcount(m.column(j)) % mod != 0) {
      top = static_cast<int>(j);
      break;
    }
  }
  if (top < 0) throw std::invalid_argument("no winning move exists from a P-position");

  std::vector<Pile> out(m.rows);
  std::vector<bool> changed(rows, false);
  unsigned t = 0;
  for (int col = top; col >= 0; --col) {
    const Pile bit = Pile{1} << col;
    unsigned ones = 0;
    for (std::size_t r = 0; r < rows; ++r) ones += (m.rows[r] & bit) ? 1 : 0;
    const unsigned a = ones % mod;
    if (a == 0) continue;
    unsigned u = 0;
    for (std::size_t r = 0; r < rows; ++r) u += (changed[r] && (m.rows[r] & bit)) ? 1 : 0;
    if (a <= u) {
      unsigned left = a;
      for (std::size_t r = 0; r < rows && left; ++r)
        if (changed[r] && (m.rows[r] & bit)) out[r] &= ~bit, --left;
    } else if (t + a - u <= k) {
      for (std::size_t r = 0; r < rows; ++r)
        if (changed[r] && (m.rows[r] & bit)) out[r] &= ~bit;
      unsigned left = a - u;
      for (std::size_t r = 0; r < rows && left; ++r) {
        if (!changed[r] && (m.rows[r] & bit)) {
          out[r] &= ~bit;
          changed[r] = true;
          ++t;
          --left;
        }
      }
    } else {
      unsigned left = mod - a;
      for (std::size_t r = 0; r < rows && left; ++r)
        if (changed[r] && !(m.rows[r] & bit)) out[r] |= bit, --left;
    }
  }
  return Position(std::span<const Pile>(out.data(), out.size()));
}

}  // namespace xnim
