#pragma once

#include <algorithm>
#include <map>
#include <string>

#include "xnim/error.hpp"
#include "xnim/rules.hpp"
#include "xnim/solver.hpp"

namespace xnim {

// Reference oracle: direct memoized recursion over the game tree, sharing no
// code with the layered solver beyond the move generator.
class BruteForceSolver {
 public:
  static constexpr std::uint64_t kMaxStones = 60;

  explicit BruteForceSolver(const GameRule& rule) : rule_(rule) {}

  Outcome outcome(const Position& x) { return eval(checked(x)).outcome; }
  unsigned remoteness(const Position& x) { return eval(checked(x)).remoteness; }

  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  struct Value {
    Outcome outcome;
    unsigned remoteness;
  };

  const Position& checked(const Position& x) const {
    if (x.size() != rule_.n) throw std::invalid_argument("brute force: wrong pile count");
    if (x.total() > kMaxStones)
      throw Error("brute force refuses positions with more than " + std::to_string(kMaxStones) + " stones");
    return x;
  }

  Value eval(const Position& x) {
    if (auto it = memo_.find(x); it != memo_.end()) return it->second;
    bool any = false, reaches_p = false;
    unsigned min_p = 0, max_all = 0;
    for (const Position& y : successors(rule_, x)) {
      const Value v = eval(y);
      if (!any) max_all = v.remoteness;
      any = true;
      max_all = std::max(max_all, v.remoteness);
      if (v.outcome == Outcome::P) {
        min_p = reaches_p ? std::min(min_p, v.remoteness) : v.remoteness;
        reaches_p = true;
      }
    }
    Value out{Outcome::P, 0};
    if (reaches_p)
      out = {Outcome::N, min_p + 1};
    else if (any)
      out = {Outcome::P, max_all + 1};
    memo_.emplace(x, out);
    return out;
  }

  GameRule rule_;
  std::map<Position, Value> memo_;
};

inline Outcome brute_force_outcome(const GameRule& rule, const Position& x) {
  return BruteForceSolver(rule).outcome(x);
}

inline unsigned brute_force_remoteness(const GameRule& rule, const Position& x) {
  return BruteForceSolver(rule).remoteness(x);
}

}  // namespace xnim
