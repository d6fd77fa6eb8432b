#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xnim/error.hpp"
#include "xnim/parallel.hpp"
#include "xnim/position.hpp"
#include "xnim/pset_index.hpp"
#include "xnim/ranking.hpp"
#include "xnim/rules.hpp"

namespace xnim {

enum class Outcome : std::uint8_t { P, N };

inline char to_char(Outcome o) { return o == Outcome::P ? 'P' : 'N'; }

// Outcome (and optionally remoteness) of every position with piles <= bound,
// indexed by colex rank. Outcomes are a bitmap: rank r lives in byte r / 8,
// bit r % 8, set for P.
class SolveTable {
 public:
  SolveTable(const GameRule& rule, Pile bound)
      : rule_(rule), bound_(bound), index_(rule.n, bound), p_bits_((index_.total() + 7) / 8, 0) {}

  const GameRule& rule() const noexcept { return rule_; }
  Pile bound() const noexcept { return bound_; }
  const RankedIndex& index() const noexcept { return index_; }
  std::uint64_t size() const noexcept { return index_.total(); }

  bool contains(const Position& x) const noexcept { return index_.contains(x); }

  std::uint64_t rank_of(const Position& x) const {
    if (x.size() != rule_.n)
      throw std::invalid_argument(rule_.name() + " positions have " + std::to_string(rule_.n) + " piles, got " +
                                  std::to_string(x.size()));
    if (!contains(x))
      throw BoundError("position (" + x.to_string() + ") exceeds table bound " + std::to_string(bound_) +
                           "; needs bound >= " + std::to_string(x.leader()),
                       x.leader());
    return index_.rank_unchecked(x.begin());
  }

  bool is_p_at(std::uint64_t r) const noexcept { return (p_bits_[r >> 3] >> (r & 7)) & 1u; }
  bool is_p(const Position& x) const { return is_p_at(rank_of(x)); }
  Outcome outcome(const Position& x) const { return is_p(x) ? Outcome::P : Outcome::N; }

  bool has_remoteness() const noexcept { return !remoteness_.empty(); }
  std::uint16_t remoteness_at(std::uint64_t r) const { return remoteness_.at(r); }
  std::uint16_t remoteness(const Position& x) const {
    if (!has_remoteness()) throw std::logic_error("table has no remoteness values");
    return remoteness_[rank_of(x)];
  }

  std::uint64_t count_p() const noexcept {
    std::uint64_t c = 0;
    for (std::uint8_t b : p_bits_) c += static_cast<std::uint64_t>(std::popcount(b));
    return c;
  }

  // Raw storage, used by the solver and the file format.
  const std::vector<std::uint8_t>& outcome_bytes() const noexcept { return p_bits_; }
  std::vector<std::uint8_t>& outcome_bytes() noexcept { return p_bits_; }
  const std::vector<std::uint16_t>& remoteness_values() const noexcept { return remoteness_; }
  std::vector<std::uint16_t>& remoteness_values() noexcept { return remoteness_; }

  void set_p_at(std::uint64_t r) noexcept { p_bits_[r >> 3] |= static_cast<std::uint8_t>(1u << (r & 7)); }

  friend bool operator==(const SolveTable& a, const SolveTable& b) {
    return a.rule_ == b.rule_ && a.bound_ == b.bound_ && a.p_bits_ == b.p_bits_ && a.remoteness_ == b.remoteness_;
  }

 private:
  GameRule rule_;
  Pile bound_;
  RankedIndex index_;
  std::vector<std::uint8_t> p_bits_;
  std::vector<std::uint16_t> remoteness_;
};

struct SolveOptions {
  unsigned threads = 1;
  bool remoteness = true;
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
};

inline std::uint64_t estimate_solve_bytes(const GameRule& rule, Pile bound, bool remoteness) {
  const std::uint64_t total = RankedIndex(rule.n, bound).total();
  std::uint64_t bytes = (total + 7) / 8 + PSetIndex::estimate_bytes(rule, bound, PSetIndex::Mode::outcome);
  if (remoteness) bytes += total * sizeof(std::uint16_t) + PSetIndex::estimate_bytes(rule, bound, PSetIndex::Mode::remoteness);
  return bytes;
}

namespace detail {

inline void check_budget(const GameRule& rule, Pile bound, bool remoteness, std::uint64_t budget) {
  std::uint64_t need = 0;
  try {
    need = estimate_solve_bytes(rule, bound, remoteness);
  } catch (const ResourceError&) {
    need = std::numeric_limits<std::uint64_t>::max();
  }
  if (need > budget)
    throw ResourceError("solving " + rule.name() + " up to bound " + std::to_string(bound) + " needs about " +
                        std::to_string(need >> 20) + " MiB, budget is " + std::to_string(budget >> 20) + " MiB");
}

// Positions with `stones` total, sorted by rank.
inline std::vector<Position> layer_positions(const RankedIndex& index, std::uint64_t stones) {
  std::vector<Position> layer;
  for_each_in_layer(index.n(), index.bound(), stones, [&](const Position& p) { layer.push_back(p); });
  std::sort(layer.begin(), layer.end(), [&](const Position& a, const Position& b) {
    return index.rank_unchecked(a.begin()) < index.rank_unchecked(b.begin());
  });
  return layer;
}

}  // namespace detail

// Backward induction by stone-sum layer. All successors of a layer lie in
// lower layers, so a position is N iff the index of P-positions from completed
// layers holds a reachable entry, and P otherwise.
inline SolveTable solve_outcomes(const GameRule& rule, Pile bound, const SolveOptions& opts = {}) {
  if (bound > kMaxBound) throw ResourceError("bound exceeds 65535");
  detail::check_budget(rule, bound, false, opts.memory_budget);
  SolveTable table(rule, bound);
  PSetIndex index(rule, bound, PSetIndex::Mode::outcome);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::vector<std::size_t>> found(threads);
  for (std::uint64_t s = 0; s <= std::uint64_t{rule.n} * bound; ++s) {
    const auto layer = detail::layer_positions(table.index(), s);
    for (auto& f : found) f.clear();
    parallel_for(layer.size(), threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i)
        if (!index.has_dominated(layer[i])) found[w].push_back(i);
    });
    for (const auto& f : found) {
      for (std::size_t i : f) {
        table.set_p_at(table.index().rank_unchecked(layer[i].begin()));
        index.insert(layer[i]);
      }
    }
  }
  return table;
}

// Fills remoteness: terminals 0; N positions 1 + min over P successors;
// P positions 1 + max over all successors.
inline void solve_remoteness(SolveTable& table, const SolveOptions& opts = {}) {
  const GameRule& rule = table.rule();
  const Pile bound = table.bound();
  detail::check_budget(rule, bound, true, opts.memory_budget);
  auto& rem = table.remoteness_values();
  rem.assign(table.size(), 0);
  PSetIndex index(rule, bound, PSetIndex::Mode::remoteness);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::vector<std::size_t>> found(threads);
  for (std::uint64_t s = 0; s <= std::uint64_t{rule.n} * bound; ++s) {
    const auto layer = detail::layer_positions(table.index(), s);
    for (auto& f : found) f.clear();
    parallel_for(layer.size(), threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i) {
        const Position& x = layer[i];
        const std::uint64_t r = table.index().rank_unchecked(x.begin());
        std::uint32_t value = 0;
        if (table.is_p_at(r)) {
          found[w].push_back(i);
          std::int64_t worst = -1;
          for_each_successor(rule, x, [&](const Position& y) {
            worst = std::max<std::int64_t>(worst, rem[table.index().rank_unchecked(y.begin())]);
          });
          value = static_cast<std::uint32_t>(worst + 1);
        } else {
          auto best = index.min_dominated_remoteness(x);
          if (!best) throw std::logic_error("N-position without P successor at (" + x.to_string() + ")");
          value = std::uint32_t{*best} + 1;
        }
        if (value >= 0xFFFF) throw ResourceError("remoteness overflows 16 bits at (" + x.to_string() + ")");
        rem[r] = static_cast<std::uint16_t>(value);
      }
    });
    for (const auto& f : found)
      for (std::size_t i : f) index.insert(layer[i], rem[table.index().rank_unchecked(layer[i].begin())]);
  }
}

inline SolveTable solve(const GameRule& rule, Pile bound, const SolveOptions& opts = {}) {
  detail::check_budget(rule, bound, opts.remoteness, opts.memory_budget);
  SolveTable table = solve_outcomes(rule, bound, opts);
  if (opts.remoteness) solve_remoteness(table, opts);
  return table;
}

// Engine move: from N, a P successor of minimum remoteness; from P, a
// successor of maximum remoteness. Ties go to the first successor in
// enumeration order. Without remoteness, the first P (resp. any) successor.
inline Position best_move(const SolveTable& table, const Position& x) {
  const GameRule& rule = table.rule();
  table.rank_of(x);
  if (is_terminal(rule, x)) throw std::invalid_argument("no move from terminal position (" + x.to_string() + ")");
  const bool from_p = table.is_p(x);
  std::optional<Position> pick;
  std::int64_t pick_r = 0;
  for (const Position& y : successors(rule, x)) {
    const std::uint64_t ry = table.rank_of(y);
    const std::int64_t r = table.has_remoteness() ? table.remoteness_at(ry) : 0;
    if (from_p) {
      if (!pick || r > pick_r) pick = y, pick_r = r;
    } else if (table.is_p_at(ry)) {
      if (!pick || r < pick_r) pick = y, pick_r = r;
    }
  }
  if (!pick) throw std::logic_error("N-position without P successor at (" + x.to_string() + ")");
  return *pick;
}

}  // namespace xnim
