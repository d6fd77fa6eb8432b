#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "oracles.hpp"
#include "xnim/xnim.hpp"

using namespace xnim;

TEST(Position, SortsAndCompares) {
  const Position x{5, 1, 3, 3, 0};
  EXPECT_EQ(x.to_string(), "0,1,3,3,5");
  EXPECT_EQ(x.leader(), 5u);
  EXPECT_EQ(x.total(), 12u);
  EXPECT_EQ(x, (Position{0, 1, 3, 3, 5}));
  EXPECT_LT((Position{0, 1, 3}), (Position{0, 2, 2}));
  EXPECT_EQ(x.to_string('-'), "0-1-3-3-5");
}

TEST(Position, ReduceDropsOneLeader) {
  EXPECT_EQ(reduce(Position{10, 19, 24, 26, 26}), (Position{10, 19, 24, 26}));
  EXPECT_EQ(reduce(Position{1, 2}), (Position{1}));
  EXPECT_THROW(reduce(Position{4}), std::invalid_argument);
}

TEST(Position, Parse) {
  EXPECT_EQ(parse_position("3,1,2"), (Position{1, 2, 3}));
  EXPECT_EQ(parse_position(" 0, 7 ,7"), (Position{0, 7, 7}));
  EXPECT_THROW(parse_position("1,,2"), std::invalid_argument);
  EXPECT_THROW(parse_position("1,x"), std::invalid_argument);
  EXPECT_THROW(parse_position("1,2,3,4,5,6,7,8,9"), std::invalid_argument);
}

TEST(Ranking, TotalsMatchBinomials) {
  for (unsigned n = 1; n <= 6; ++n)
    for (Pile b : {0u, 1u, 5u, 17u}) EXPECT_EQ(RankedIndex(n, b).total(), oracle::binomial(b + n, n)) << n << " " << b;
  EXPECT_EQ(RankedIndex(5, 85).total(), 43949268u);
  EXPECT_EQ(RankedIndex(5, 30).total(), 324632u);
  EXPECT_EQ(RankedIndex(4, 85).total(), 2441626u);
}

TEST(Ranking, RankIsBijective) {
  for (unsigned n = 1; n <= 5; ++n) {
    const RankedIndex idx(n, 9);
    std::vector<bool> seen(idx.total(), false);
    for (const Position& x : oracle::all_positions(n, 9)) {
      const auto r = idx.rank(x);
      ASSERT_LT(r, idx.total());
      EXPECT_FALSE(seen[r]);
      seen[r] = true;
      EXPECT_EQ(idx.unrank(r), x);
    }
  }
}

TEST(Ranking, PrefixOfLargerBoundAgrees) {
  const RankedIndex small(5, 12), large(5, 40);
  for (const Position& x : oracle::all_positions(5, 12)) EXPECT_EQ(small.rank(x), large.rank(x));
}

TEST(Ranking, RejectsOutOfBound) {
  const RankedIndex idx(3, 4);
  EXPECT_FALSE(idx.contains(Position{0, 1, 5}));
  EXPECT_THROW(idx.rank(Position{0, 1, 5}), std::out_of_range);
  EXPECT_THROW(idx.unrank(idx.total()), std::out_of_range);
}

TEST(Ranking, ForEachRankedVisitsInRankOrder) {
  const RankedIndex idx(4, 11);
  std::uint64_t expect = 0;
  for_each_ranked(idx, 0, 11, [&](std::uint64_t r, const Position& x) {
    EXPECT_EQ(r, expect++);
    EXPECT_EQ(idx.rank(x), r);
  });
  EXPECT_EQ(expect, idx.total());
  std::uint64_t first = ~0ull, count = 0;
  for_each_ranked(idx, 5, 7, [&](std::uint64_t r, const Position& x) {
    if (first == ~0ull) first = r;
    EXPECT_GE(x.leader(), 5u);
    EXPECT_LE(x.leader(), 7u);
    ++count;
  });
  EXPECT_EQ(first, oracle::binomial(5 + 3, 4));
  EXPECT_EQ(count, oracle::binomial(8 + 3, 4) - oracle::binomial(5 + 3, 4));
}

TEST(Ranking, LayersPartitionTheUniverse) {
  std::uint64_t total = 0;
  for (std::uint64_t s = 0; s <= 5 * 6; ++s)
    for_each_in_layer(5, 6, s, [&](const Position& x) {
      EXPECT_EQ(x.total(), s);
      ++total;
    });
  EXPECT_EQ(total, RankedIndex(5, 6).total());
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, threads, [&](std::size_t b, std::size_t e, unsigned) {
      for (auto i = b; i < e; ++i) ++hits[i];
    });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  const RankedIndex idx(3, 20);
  std::vector<std::atomic<int>> seen(idx.total());
  parallel_for_each_ranked(idx, 4, [&](std::uint64_t r, const Position& x, unsigned) {
    EXPECT_EQ(idx.rank(x), r);
    ++seen[r];
  });
  for (auto& h : seen) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsWorkerErrors) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t b, std::size_t, unsigned) {
                              if (b > 0) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Bits, MatrixAndMooreVector) {
  const Position x{10, 19, 24, 26};
  const BoutonMatrix m = bouton_matrix(x);
  EXPECT_EQ(m.width, 5u);
  const auto sums = oracle::column_sums(x);
  const MooreVector mv = moore_vector(m);
  ASSERT_EQ(mv.sums.size(), 5u);
  for (unsigned j = 0; j < 5; ++j) EXPECT_EQ(mv.sums[j], sums[j]);
  EXPECT_EQ(bouton_matrix(Position{0, 0}).width, 1u);
}

TEST(Bits, Xi) {
  const MooreVector mv{{3, 0, 2, 3, 1}};
  EXPECT_EQ(xi(mv, 3), 0b01001u);
  EXPECT_EQ(xi(mv, 2), 0b00100u);
  EXPECT_EQ(xi(mv, 4), 0u);
}

TEST(Bits, ColumnPermutation) {
  // 1 = 01, 2 = 10: swapping the two columns maps {1,2} rows to {2,1}.
  const BoutonMatrix a{{1, 2}, 2}, b{{2, 1}, 2};
  EXPECT_TRUE(is_column_permutation(a, b));
  EXPECT_FALSE(is_column_permutation(a, a));
  EXPECT_FALSE(is_column_permutation(a, BoutonMatrix{{3, 0}, 2}));
  // Padding: 1 vs 4 in one row are permutations (a zero column moved).
  EXPECT_TRUE(is_column_permutation(BoutonMatrix{{1}, 1}, BoutonMatrix{{4}, 3}));
}

TEST(Bits, ZeroColumnInsertion) {
  EXPECT_EQ(insert_zero_column(0b1011, 0), 0b10110u);
  EXPECT_EQ(insert_zero_column(0b1011, 2), 0b10011u);
  EXPECT_EQ(insert_zero_column(5, 63), 5u);
  const auto at = zero_column_insertions(bouton_matrix(Position{6, 9, 10, 11}),
                                         bouton_matrix(Position{12, 18, 20, 22}));
  ASSERT_FALSE(at.empty());
  EXPECT_EQ(at.front(), 0u);
}

TEST(Bits, ZeroColumnInsertionProperty) {
  std::mt19937 rng(7);
  for (int it = 0; it < 500; ++it) {
    std::vector<Pile> v(4);
    for (auto& p : v) p = rng() % 200;
    const Position x(std::span<const Pile>(v.data(), v.size()));
    const unsigned p = rng() % 8;
    std::vector<Pile> w;
    for (Pile q : x) w.push_back(static_cast<Pile>(insert_zero_column(q, p)));
    const Position y = Position::from_sorted(std::span<const Pile>(w));
    const auto at = zero_column_insertions(bouton_matrix(x), bouton_matrix(y));
    if (p < std::bit_width(x.leader())) {
      EXPECT_NE(std::find(at.begin(), at.end(), p), at.end());
    }
    for (unsigned q : at) EXPECT_EQ(moore_vector(x).sums.size() + 1, moore_vector(y).sums.size()) << q;
  }
}
