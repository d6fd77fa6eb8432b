#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "xnim/position.hpp"
#include "xnim/ranking.hpp"
#include "xnim/rules.hpp"

namespace xnim {

// Answers "does some legal move from x land in the indexed set?" without
// enumerating successors.
//
// A move of arity j keeps an (n-j)-element sub-multiset S of x and replaces the
// chosen values a_1 <= ... <= a_j by smaller ones. It reaches an indexed
// position p iff p = S + {c_1 <= ... <= c_j} with c_t < a_t for every t (sorted
// matching is optimal). So each inserted p is filed under every split
// (S, c) and a query probes each split of x.
//
// Outcome mode keeps, per key S, the minimum c for j = 1 and a prefix-minimum
// table (min c_2 over entries with c_1 < a) for j = 2, making queries O(1).
// Larger arities, and remoteness mode, keep per-key entry lists; in remoteness
// mode those are ordered by remoteness so the first dominated entry is the
// minimum.
class PSetIndex {
 public:
  enum class Mode { outcome, remoteness };

  PSetIndex(const GameRule& rule, Pile bound, Mode mode) : rule_(rule), bound_(bound), mode_(mode) {
    for (unsigned j = rule.min_arity(); j <= rule.max_arity() && j <= rule.n; ++j) {
      Slot s;
      s.arity = j;
      s.keys = RankedIndex(rule.n - j, bound);
      if (fast(j)) {
        if (j == 1) s.min_value.assign(s.keys.total(), kNone);
        if (j == 2) s.prefix_min.assign(s.keys.total() * (static_cast<std::size_t>(bound) + 1), kNone);
      } else {
        s.lists.resize(s.keys.total());
      }
      s.splits = splits_for(rule.n, j);
      slots_.push_back(std::move(s));
    }
  }

  // Bytes held by the fixed-size outcome-mode tables.
  static std::uint64_t estimate_bytes(const GameRule& rule, Pile bound, Mode mode) {
    std::uint64_t bytes = 0;
    for (unsigned j = rule.min_arity(); j <= rule.max_arity() && j <= rule.n; ++j) {
      const std::uint64_t keys = RankedIndex(rule.n - j, bound).total();
      if (mode == Mode::outcome && j == 1) bytes += keys * sizeof(std::uint16_t);
      else if (mode == Mode::outcome && j == 2) bytes += keys * (std::uint64_t{bound} + 1) * sizeof(std::uint16_t);
      else bytes += keys * sizeof(std::vector<std::uint16_t>);
    }
    return bytes;
  }

  std::uint64_t size() const noexcept { return inserted_; }

  void insert(const Position& p, std::uint16_t remoteness = 0) {
    ++inserted_;
    std::array<Pile, kMaxPiles> rest{}, chosen{};
    for (Slot& s : slots_) {
      std::vector<std::pair<std::uint64_t, std::array<Pile, kMaxPiles>>> filed;
      for (std::uint32_t mask : s.splits) {
        split(p, mask, rest.data(), chosen.data());
        const std::uint64_t key = s.keys.rank_unchecked(rest.data());
        if (fast(s.arity)) {
          if (s.arity == 1) {
            auto& m = s.min_value[key];
            m = std::min<std::uint16_t>(m, static_cast<std::uint16_t>(chosen[0]));
          } else {
            std::uint16_t* row = &s.prefix_min[key * (std::size_t{bound_} + 1)];
            for (std::size_t a = chosen[0] + 1; a <= bound_; ++a) {
              if (row[a] <= chosen[1]) break;  // later entries are already <= too
              row[a] = static_cast<std::uint16_t>(chosen[1]);
            }
          }
          continue;
        }
        const bool dup = std::any_of(filed.begin(), filed.end(), [&](const auto& f) {
          return f.first == key && std::equal(chosen.begin(), chosen.begin() + s.arity, f.second.begin());
        });
        if (dup) continue;
        filed.emplace_back(key, chosen);
        auto& list = s.lists[key];
        const std::size_t stride = s.arity + 1;
        std::size_t at = list.size();
        if (mode_ == Mode::remoteness)
          while (at >= stride && list[at - 1] > remoteness) at -= stride;
        std::array<std::uint16_t, kMaxPiles + 1> entry{};
        for (unsigned t = 0; t < s.arity; ++t) entry[t] = static_cast<std::uint16_t>(chosen[t]);
        entry[s.arity] = remoteness;
        list.insert(list.begin() + static_cast<std::ptrdiff_t>(at), entry.begin(), entry.begin() + stride);
      }
    }
  }

  // True iff some legal move from x reaches an indexed position.
  bool has_dominated(const Position& x) const {
    std::array<Pile, kMaxPiles> rest{}, chosen{};
    for (const Slot& s : slots_) {
      for (std::uint32_t mask : s.splits) {
        split(x, mask, rest.data(), chosen.data());
        if (chosen[0] == 0) continue;  // cannot reduce an empty pile
        const std::uint64_t key = s.keys.rank_unchecked(rest.data());
        if (fast(s.arity)) {
          if (s.arity == 1 ? s.min_value[key] < chosen[0]
                           : s.prefix_min[key * (std::size_t{bound_} + 1) + chosen[0]] < chosen[1])
            return true;
          continue;
        }
        const auto& list = s.lists[key];
        const std::size_t stride = s.arity + 1;
        for (std::size_t e = 0; e < list.size(); e += stride)
          if (dominated(&list[e], chosen.data(), s.arity)) return true;
      }
    }
    return false;
  }

  // Minimum remoteness over indexed positions reachable from x (remoteness
  // mode only).
  std::optional<std::uint16_t> min_dominated_remoteness(const Position& x) const {
    std::optional<std::uint16_t> best;
    std::array<Pile, kMaxPiles> rest{}, chosen{};
    for (const Slot& s : slots_) {
      for (std::uint32_t mask : s.splits) {
        split(x, mask, rest.data(), chosen.data());
        if (chosen[0] == 0) continue;
        const std::uint64_t key = s.keys.rank_unchecked(rest.data());
        const auto& list = s.lists[key];
        const std::size_t stride = s.arity + 1;
        for (std::size_t e = 0; e < list.size(); e += stride) {
          const std::uint16_t r = list[e + s.arity];
          if (best && r >= *best) break;
          if (dominated(&list[e], chosen.data(), s.arity)) {
            best = r;
            break;
          }
        }
      }
    }
    return best;
  }

 private:
  static constexpr std::uint16_t kNone = 0xFFFF;

  struct Slot {
    unsigned arity = 0;
    RankedIndex keys;
    std::vector<std::uint32_t> splits;  // masks of chosen indices, value-distinct not required
    std::vector<std::uint16_t> min_value;
    std::vector<std::uint16_t> prefix_min;
    std::vector<std::vector<std::uint16_t>> lists;
  };

  bool fast(unsigned j) const noexcept { return mode_ == Mode::outcome && j <= 2; }

  static std::vector<std::uint32_t> splits_for(unsigned n, unsigned j) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
      if (static_cast<unsigned>(std::popcount(mask)) == j) out.push_back(mask);
    return out;
  }

  // Splits sorted x into untouched piles (rest) and chosen piles, both sorted.
  static void split(const Position& x, std::uint32_t mask, Pile* rest, Pile* chosen) noexcept {
    std::size_t r = 0, c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (mask & (1u << i))
        chosen[c++] = x[i];
      else
        rest[r++] = x[i];
    }
  }

  static bool dominated(const std::uint16_t* entry, const Pile* chosen, unsigned arity) noexcept {
    for (unsigned t = 0; t < arity; ++t)
      if (entry[t] >= chosen[t]) return false;
    return true;
  }

  GameRule rule_;
  Pile bound_;
  Mode mode_;
  std::vector<Slot> slots_;
  std::uint64_t inserted_ = 0;
};

}  // namespace xnim
