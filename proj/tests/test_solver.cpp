#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xnim/xnim.hpp"

using namespace xnim;

namespace {

void expect_matches_brute_force(const GameRule& rule, Pile bound, std::uint64_t max_total) {
  const SolveTable t = solve(rule, bound);
  BruteForceSolver bf(rule);
  std::uint64_t checked = 0;
  for_each_ranked(t.index(), 0, bound, [&](std::uint64_t r, const Position& x) {
    if (x.total() > max_total) return;
    ++checked;
    ASSERT_EQ(t.is_p_at(r), bf.outcome(x) == Outcome::P) << rule.name() << " " << x.to_string();
    ASSERT_EQ(t.remoteness_at(r), bf.remoteness(x)) << rule.name() << " " << x.to_string();
  });
  EXPECT_GT(checked, 0u);
}

}  // namespace

TEST(Solver, MatchesBruteForceSmall) {
  expect_matches_brute_force(GameRule::exact(5, 2), 12, 16);
  expect_matches_brute_force(GameRule::moore(4, 2), 12, 14);
  expect_matches_brute_force(GameRule::nim(3), 10, 30);
  expect_matches_brute_force(GameRule::exact(4, 3), 8, 20);
  expect_matches_brute_force(GameRule::moore(5, 3), 6, 20);
}

TEST(Solver, MatchesPeelingOracle) {
  for (const GameRule& rule : {GameRule::exact(5, 2), GameRule::moore(4, 2), GameRule::exact(3, 2)}) {
    const Pile bound = rule.n == 5 ? 7 : 9;
    const auto labels = oracle::peel(rule, bound);
    const SolveTable t = solve(rule, bound);
    for (const auto& [x, l] : labels) {
      EXPECT_EQ(t.is_p(x), l.p) << x.to_string();
      EXPECT_EQ(t.remoteness(x), l.remoteness) << x.to_string();
    }
  }
}

TEST(Solver, RemotenessParity) {
  const SolveTable t = solve(GameRule::exact(5, 2), 20);
  for (std::uint64_t r = 0; r < t.size(); ++r) ASSERT_EQ(t.is_p_at(r), t.remoteness_at(r) % 2 == 0) << r;
}

TEST(Solver, OutcomeOnlyAgreesWithRemotenessPass) {
  SolveOptions o;
  o.remoteness = false;
  SolveTable a = solve(GameRule::exact(5, 2), 18, o);
  EXPECT_FALSE(a.has_remoteness());
  const SolveTable b = solve(GameRule::exact(5, 2), 18);
  EXPECT_EQ(a.outcome_bytes(), b.outcome_bytes());
  solve_remoteness(a);
  EXPECT_EQ(a, b);
}

TEST(Solver, BoundStability) {
  const GameRule rules[] = {GameRule::exact(5, 2), GameRule::moore(4, 2)};
  for (const GameRule& rule : rules) {
    const SolveTable small = solve(rule, 10), large = solve(rule, 17);
    for_each_ranked(small.index(), 0, 10, [&](std::uint64_t r, const Position& x) {
      ASSERT_EQ(small.is_p_at(r), large.is_p(x));
      ASSERT_EQ(small.remoteness_at(r), large.remoteness(x));
    });
  }
}

TEST(Solver, ThreadCountDoesNotMatter) {
  SolveOptions one, many;
  many.threads = 5;
  EXPECT_EQ(solve(GameRule::exact(5, 2), 16, one), solve(GameRule::exact(5, 2), 16, many));
  EXPECT_EQ(solve(GameRule::moore(4, 2), 16, one), solve(GameRule::moore(4, 2), 16, many));
}

TEST(Solver, KnownSmallValues) {
  const SolveTable t = solve(GameRule::exact(5, 2), 6);
  EXPECT_EQ(t.outcome(Position{0, 0, 0, 0, 0}), Outcome::P);
  EXPECT_EQ(t.outcome(Position{0, 0, 0, 0, 9 - 3}), Outcome::P);  // one nonempty pile: no move
  EXPECT_EQ(t.outcome(Position{0, 0, 0, 1, 1}), Outcome::N);
  EXPECT_EQ(t.remoteness(Position{0, 0, 0, 1, 1}), 1);
  EXPECT_EQ(t.outcome(Position{0, 0, 1, 1, 1}), Outcome::N);
  // Three equal piles with two empty: P by the empty-pile closed form.
  EXPECT_EQ(t.outcome(Position{0, 2, 2, 2, 5}), Outcome::P);
}

TEST(Solver, ClosedFormsAgreeWithTables) {
  EXPECT_TRUE(check_bouton(solve(GameRule::nim(3), 16)).passed());
  EXPECT_TRUE(check_moore(solve(GameRule::moore(4, 2), 16)).passed());
  EXPECT_TRUE(check_moore(solve(GameRule::moore(3, 2), 10)).passed());
  EXPECT_TRUE(check_moore(solve(GameRule::moore(5, 3), 8)).passed());
  const auto rep = check_thm10(solve(GameRule::exact(5, 2), 24));
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.scanned, RankedIndex(4, 24).total());
}

TEST(Solver, MooreCountMatchesCriterionCount) {
  const Pile b = 30;
  std::uint64_t want = 0;
  for (const Position& x : oracle::all_positions(4, b)) {
    bool ok = true;
    for (unsigned s : oracle::column_sums(x)) ok = ok && s % 3 == 0;
    want += ok;
  }
  SolveOptions o;
  o.remoteness = false;
  EXPECT_EQ(solve(GameRule::moore(4, 2), b, o).count_p(), want);
}

TEST(Solver, BestMove) {
  const SolveTable t = solve(GameRule::exact(5, 2), 12);
  for_each_ranked(t.index(), 0, 12, [&](std::uint64_t r, const Position& x) {
    if (is_terminal(t.rule(), x)) {
      EXPECT_THROW(best_move(t, x), std::invalid_argument);
      return;
    }
    const Position y = best_move(t, x);
    ASSERT_TRUE(move_exists_between(t.rule(), x, y));
    ASSERT_EQ(t.remoteness(y) + 1, t.remoteness_at(r)) << x.to_string();
    if (!t.is_p_at(r)) {
      ASSERT_TRUE(t.is_p(y));
    }
  });
}

TEST(Solver, BoundErrors) {
  const SolveTable t = solve(GameRule::exact(5, 2), 5);
  try {
    (void)t.is_p(Position{0, 0, 0, 0, 9});
    FAIL();
  } catch (const BoundError& e) {
    EXPECT_EQ(e.required_bound(), 9u);
  }
  EXPECT_THROW((void)t.is_p(Position{0, 0, 1}), std::invalid_argument);
}

TEST(Solver, MemoryBudgetIsCheckedBeforeAllocating) {
  SolveOptions o;
  o.memory_budget = 1 << 20;
  EXPECT_THROW(solve(GameRule::exact(5, 2), 200, o), ResourceError);
  EXPECT_GT(estimate_solve_bytes(GameRule::exact(5, 2), 85, true), RankedIndex(5, 85).total() * 2);
}

TEST(PSetIndex, DominanceMatchesBruteForce) {
  for (const GameRule& rule : {GameRule::exact(5, 2), GameRule::moore(4, 2), GameRule::exact(4, 3)}) {
    const Pile b = 6;
    PSetIndex idx(rule, b, PSetIndex::Mode::remoteness);
    std::vector<std::pair<Position, std::uint16_t>> inserted;
    std::uint16_t tag = 0;
    for (const Position& x : oracle::all_positions(rule.n, b)) {
      if ((x.total() * 7 + x.leader()) % 5 != 0) continue;
      idx.insert(x, tag);
      inserted.push_back({x, tag});
      tag = static_cast<std::uint16_t>((tag + 3) % 11);
    }
    for (const Position& x : oracle::all_positions(rule.n, b)) {
      std::optional<std::uint16_t> best;
      for (const auto& [p, rem] : inserted)
        if (move_exists_between(rule, x, p)) best = best ? std::min(*best, rem) : rem;
      ASSERT_EQ(idx.has_dominated(x), best.has_value()) << x.to_string();
      ASSERT_EQ(idx.min_dominated_remoteness(x), best) << x.to_string();
    }
  }
}
