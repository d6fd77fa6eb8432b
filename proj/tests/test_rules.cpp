#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "xnim/xnim.hpp"

using namespace xnim;

namespace {

Position random_position(std::mt19937& rng, unsigned n, Pile bound) {
  std::vector<Pile> v(n);
  for (auto& p : v) p = rng() % (bound + 1);
  return Position(std::span<const Pile>(v));
}

}  // namespace

TEST(GameRule, Validation) {
  EXPECT_EQ(GameRule::exact(5, 2).name(), "exact(5,=2)");
  EXPECT_EQ(GameRule::moore(4, 2).name(), "moore(4,<=2)");
  EXPECT_EQ(GameRule::nim(3).name(), "nim(3)");
  EXPECT_THROW(GameRule::exact(3, 4), std::invalid_argument);
  EXPECT_THROW(GameRule::moore(4, 0), std::invalid_argument);
  EXPECT_THROW(GameRule::make(Family::nim, 3, 2), std::invalid_argument);
  EXPECT_THROW(GameRule::exact(9, 2), std::invalid_argument);
  EXPECT_EQ(parse_family("exact"), Family::exact);
  EXPECT_THROW(parse_family("chess"), std::invalid_argument);
}

TEST(Moves, MatchNaiveGenerator) {
  std::mt19937 rng(11);
  const GameRule rules[] = {GameRule::exact(5, 2), GameRule::moore(4, 2), GameRule::nim(3), GameRule::moore(5, 3),
                            GameRule::exact(4, 3), GameRule::exact(5, 1)};
  for (const GameRule& rule : rules) {
    for (int it = 0; it < 200; ++it) {
      const Position x = random_position(rng, rule.n, 9);
      const auto want = oracle::successors(rule, x);
      const auto got = successors(rule, x);
      EXPECT_EQ(std::set<Position>(got.begin(), got.end()), want) << rule.name() << " " << x.to_string();
      EXPECT_EQ(std::set<Position>(got.begin(), got.end()).size(), got.size());
      for (const auto& y : want) EXPECT_TRUE(move_exists_between(rule, x, y)) << x.to_string() << " " << y.to_string();
      EXPECT_EQ(is_terminal(rule, x), want.empty());
    }
  }
}

TEST(Moves, RawMoveCount) {
  // Raw moves: an index subset plus new values. From (1,2,3,4,5) in
  // exact(5,=2): sum over index pairs of x_i * x_j.
  const Position x{1, 2, 3, 4, 5};
  std::uint64_t raw = 0;
  for_each_move(GameRule::exact(5, 2), x, [&](std::uint32_t mask, const Position& y) {
    EXPECT_EQ(std::popcount(mask), 2);
    EXPECT_EQ(y.total() < x.total(), true);
    ++raw;
  });
  std::uint64_t want = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) want += x[i] * x[j];
  EXPECT_EQ(raw, want);
}

TEST(Moves, MoveExistsRejectsNonMoves) {
  const GameRule r = GameRule::exact(5, 2);
  EXPECT_FALSE(move_exists_between(r, Position{1, 2, 3, 4, 5}, Position{0, 2, 3, 4, 5}));
  EXPECT_FALSE(move_exists_between(r, Position{2, 2, 2, 2, 2}, Position{1, 1, 1, 2, 2}));
  EXPECT_TRUE(move_exists_between(r, Position{1, 2, 3, 4, 5}, Position{0, 1, 3, 4, 5}));
  // The pair from the zero-column relation: piles grow, so no move.
  EXPECT_FALSE(move_exists_between(r, Position{6, 9, 10, 11, 59}, Position{12, 18, 20, 22, 22}));
}

TEST(Moves, ApplyMoveEnforcesRules) {
  const GameRule r = GameRule::exact(5, 2);
  const Position x{1, 2, 3, 4, 5};
  EXPECT_EQ(apply_move(r, x, Move{{{0, 0}, {4, 1}}}), (Position{0, 1, 2, 3, 4}));
  EXPECT_THROW(apply_move(r, x, Move{{{0, 0}}}), IllegalMoveError);
  EXPECT_THROW(apply_move(r, x, Move{{{0, 0}, {1, 2}}}), IllegalMoveError);
  EXPECT_THROW(apply_move(r, x, Move{{{0, 0}, {0, 0}}}), IllegalMoveError);
  EXPECT_THROW(apply_move(r, x, Move{{{0, 0}, {7, 0}}}), IllegalMoveError);
  try {
    apply_move(r, x, Move{{{2, 1}}});
    FAIL();
  } catch (const IllegalMoveError& e) {
    EXPECT_NE(std::string(e.what()).find("exactly 2"), std::string::npos);
  }
  EXPECT_EQ(apply_move(GameRule::moore(4, 2), Position{1, 2, 3, 4}, Move{{{3, 0}}}), (Position{0, 1, 2, 3}));
}

TEST(ClosedForms, BoutonAndMoore) {
  EXPECT_TRUE(bouton_is_p(Position{1, 2, 3}));
  EXPECT_FALSE(bouton_is_p(Position{1, 2, 4}));
  EXPECT_TRUE(moore_is_p(Position{1, 1, 1, 0}, 2));
  EXPECT_FALSE(moore_is_p(Position{1, 1, 0, 0}, 2));
  EXPECT_TRUE(moore_is_p(Position{3, 5, 6, 0}, 2) == false);
  EXPECT_TRUE(moore_is_p(Position{7, 7, 7, 0}, 2));
}

TEST(ClosedForms, Thm10Domain) {
  EXPECT_TRUE(thm10_is_p(Position{0, 3, 3, 3, 9}));
  EXPECT_FALSE(thm10_is_p(Position{0, 3, 3, 4, 9}));
  EXPECT_THROW(thm10_is_p(Position{1, 3, 3, 3, 9}), std::invalid_argument);
  EXPECT_THROW(thm10_is_p(Position{0, 3, 3, 3}), std::invalid_argument);
}

TEST(ClosedForms, MooreWinningMoveProperty) {
  std::mt19937 rng(3);
  const std::pair<unsigned, unsigned> shapes[] = {{4, 2}, {3, 2}, {5, 3}, {6, 2}, {3, 1}};
  for (auto [n, k] : shapes) {
    const GameRule rule = GameRule::moore(n, k);
    for (int it = 0; it < 2000; ++it) {
      const Position x = random_position(rng, n, 1000);
      if (moore_is_p(x, k)) {
        EXPECT_THROW(moore_winning_move(x, k), std::invalid_argument);
        continue;
      }
      const Position y = moore_winning_move(x, k);
      EXPECT_TRUE(moore_is_p(y, k)) << x.to_string() << " -> " << y.to_string();
      EXPECT_TRUE(move_exists_between(rule, x, y)) << x.to_string() << " -> " << y.to_string();
    }
  }
}
