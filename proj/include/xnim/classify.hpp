#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xnim/error.hpp"
#include "xnim/parallel.hpp"
#include "xnim/pset_index.hpp"
#include "xnim/rules.hpp"
#include "xnim/solver.hpp"

namespace xnim {

// First letter: exact(n,=k) outcome of x. Second: moore(n-1,<=k) outcome of
// the reduced position.
enum class PairClass : std::uint8_t { PP = 0, PN = 1, NP = 2, NN = 3 };
enum class Quality : std::uint8_t { Good, Bad };
enum class Regularity : std::uint8_t { Regular, Exceptional };

inline const char* to_string(PairClass c) {
  static constexpr const char* names[] = {"PP", "PN", "NP", "NN"};
  return names[static_cast<int>(c)];
}
inline const char* to_string(Quality q) { return q == Quality::Good ? "good" : "bad"; }
inline const char* to_string(Regularity r) { return r == Regularity::Regular ? "regular" : "exceptional"; }

inline PairClass make_pair_class(bool exact_p, bool moore_p) {
  return static_cast<PairClass>((exact_p ? 0 : 2) + (moore_p ? 0 : 1));
}

// Per-position labels over the exact-game universe, indexed by exact rank.
class ClassTable {
 public:
  enum Flag : std::uint8_t {
    kExactP = 1u << 0,
    kMooreP = 1u << 1,       // reduction is a moore P-position ("*P")
    kReachesStarP = 1u << 2, // some exact move reaches a *P position
    kGood = 1u << 3,
    kExceptional = 1u << 4,
  };

  explicit ClassTable(std::uint64_t size = 0) : flags_(size, 0) {}

  std::uint64_t size() const noexcept { return flags_.size(); }
  std::uint8_t flags_at(std::uint64_t r) const noexcept { return flags_[r]; }
  std::uint8_t& flags_at(std::uint64_t r) noexcept { return flags_[r]; }

  bool exact_p_at(std::uint64_t r) const noexcept { return flags_[r] & kExactP; }
  bool moore_p_at(std::uint64_t r) const noexcept { return flags_[r] & kMooreP; }
  bool reaches_star_p_at(std::uint64_t r) const noexcept { return flags_[r] & kReachesStarP; }
  PairClass pair_class_at(std::uint64_t r) const noexcept { return make_pair_class(exact_p_at(r), moore_p_at(r)); }
  Quality quality_at(std::uint64_t r) const noexcept { return (flags_[r] & kGood) ? Quality::Good : Quality::Bad; }
  std::optional<Regularity> regularity_at(std::uint64_t r) const noexcept {
    if (flags_[r] & kGood) return std::nullopt;
    return (flags_[r] & kExceptional) ? Regularity::Exceptional : Regularity::Regular;
  }
  bool exceptional_at(std::uint64_t r) const noexcept { return !(flags_[r] & kGood) && (flags_[r] & kExceptional); }
  bool deadender_at(std::uint64_t r) const noexcept { return !(flags_[r] & (kMooreP | kReachesStarP)); }

 private:
  std::vector<std::uint8_t> flags_;
};

struct UniverseOptions {
  unsigned threads = 1;
  bool remoteness = true;
  bool taxonomy = true;  // quality, regularity, exceptional labels
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
};

// Solved exact(n,=k) and moore(n-1,<=k) tables over one bound, plus the
// position labels that relate them.
class Universe {
 public:
  Universe(SolveTable exact, SolveTable moore, const UniverseOptions& opts = {})
      : exact_(std::move(exact)), moore_(std::move(moore)) {
    if (exact_.rule().family != Family::exact || moore_.rule().family != Family::moore ||
        moore_.rule().n + 1 != exact_.rule().n || moore_.rule().k != exact_.rule().k)
      throw std::invalid_argument("universe needs exact(n,=k) and moore(n-1,<=k) tables");
    if (exact_.bound() != moore_.bound()) throw std::invalid_argument("universe tables must share a bound");
    classify(opts);
  }

  static Universe build(Pile bound, const UniverseOptions& opts = {}, unsigned n = 5, unsigned k = 2) {
    SolveOptions so{opts.threads, opts.remoteness, opts.memory_budget};
    return Universe(solve(GameRule::exact(n, k), bound, so), solve(GameRule::moore(n - 1, k), bound, so), opts);
  }

  const SolveTable& exact() const noexcept { return exact_; }
  const SolveTable& moore() const noexcept { return moore_; }
  const ClassTable& classes() const noexcept { return classes_; }
  const GameRule& rule() const noexcept { return exact_.rule(); }
  Pile bound() const noexcept { return exact_.bound(); }
  std::uint64_t size() const noexcept { return exact_.size(); }
  bool has_taxonomy() const noexcept { return taxonomy_; }
  bool has_remoteness() const noexcept { return exact_.has_remoteness() && moore_.has_remoteness(); }

  std::uint64_t rank_of(const Position& x) const { return exact_.rank_of(x); }
  Position unrank(std::uint64_t r) const { return exact_.index().unrank(r); }

  PairClass pair_class(const Position& x) const { return classes_.pair_class_at(rank_of(x)); }
  Quality quality(const Position& x) const { return classes_.quality_at(checked_taxonomy(x)); }
  std::optional<Regularity> regularity(const Position& x) const {
    return classes_.regularity_at(checked_taxonomy(x));
  }

  std::uint64_t moore_rank_of_reduction(const Position& x) const {
    const Position red = reduce(x);
    return moore_.index().rank_unchecked(red.begin());
  }

 private:
  std::uint64_t checked_taxonomy(const Position& x) const {
    if (!taxonomy_) throw std::logic_error("universe was built without the good/bad taxonomy");
    return rank_of(x);
  }

  void classify(const UniverseOptions& opts) {
    const GameRule rule = exact_.rule();
    const unsigned threads = std::max(1u, opts.threads);
    classes_ = ClassTable(exact_.size());
    parallel_for_each_ranked(exact_.index(), threads, [&](std::uint64_t r, const Position& x, unsigned) {
      std::uint8_t f = 0;
      if (exact_.is_p_at(r)) f |= ClassTable::kExactP;
      if (moore_.is_p_at(moore_rank_of_reduction(x))) f |= ClassTable::kMooreP;
      classes_.flags_at(r) = f;
    });
    if (!opts.taxonomy) return;
    taxonomy_ = true;

    // ∃ move to *P
    PSetIndex star_p(rule, bound(), PSetIndex::Mode::outcome);
    for_each_ranked(exact_.index(), 0, bound(), [&](std::uint64_t r, const Position& x) {
      if (classes_.moore_p_at(r)) star_p.insert(x);
    });
    parallel_for_each_ranked(exact_.index(), threads, [&](std::uint64_t r, const Position& x, unsigned) {
      std::uint8_t& f = classes_.flags_at(r);
      if (star_p.has_dominated(x)) f |= ClassTable::kReachesStarP;
      const bool reach = f & ClassTable::kReachesStarP;
      bool good = false;
      switch (classes_.pair_class_at(r)) {
        case PairClass::PP: good = true; break;
        case PairClass::NP: good = false; break;
        case PairClass::NN: good = reach; break;
        case PairClass::PN: good = !reach; break;
      }
      if (good) f |= ClassTable::kGood;
    });

    // Bad N: exceptional iff no move to a good P. Bad P: exceptional iff some
    // move reaches a bad N.
    PSetIndex good_p(rule, bound(), PSetIndex::Mode::outcome);
    for_each_ranked(exact_.index(), 0, bound(), [&](std::uint64_t r, const Position& x) {
      if (classes_.exact_p_at(r) && classes_.quality_at(r) == Quality::Good) good_p.insert(x);
    });
    parallel_for_each_ranked(exact_.index(), threads, [&](std::uint64_t r, const Position& x, unsigned) {
      if (classes_.quality_at(r) == Quality::Good) return;
      bool exceptional = false;
      if (!classes_.exact_p_at(r)) {
        exceptional = !good_p.has_dominated(x);
      } else {
        for_each_successor(rule, x, [&](const Position& y) {
          if (exceptional) return;
          const std::uint64_t ry = exact_.index().rank_unchecked(y.begin());
          exceptional = !classes_.exact_p_at(ry) && classes_.quality_at(ry) == Quality::Bad;
        });
      }
      if (exceptional) classes_.flags_at(r) |= ClassTable::kExceptional;
    });
  }

  SolveTable exact_;
  SolveTable moore_;
  ClassTable classes_;
  bool taxonomy_ = false;
};

// Positions whose reduction is moore-N and from which no exact move reaches a
// position with moore-P reduction.
inline std::vector<Position> deadenders(const Universe& u) {
  if (!u.has_taxonomy()) throw std::logic_error("deadenders need the taxonomy pass");
  std::vector<Position> out;
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    if (u.classes().deadender_at(r)) out.push_back(x);
  });
  return out;
}

struct ExceptionalNode {
  Position pos;
  bool exact_p = false;
  PairClass pair_class = PairClass::PP;
  std::uint32_t out_distinct = 0;  // distinct exceptional successor positions
  std::uint32_t out_moves = 0;     // generator moves (pile indices + new values) landing on exceptional positions
  std::uint32_t in_degree = 0;

  bool isolated() const noexcept { return out_distinct == 0 && in_degree == 0; }
};

// Exact-game moves restricted to exceptional positions. Nodes are in rank
// order; edges join distinct canonical positions.
struct ExceptionalGraph {
  std::vector<ExceptionalNode> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::size_t isolated_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& v) { return v.isolated(); }));
  }
};

inline ExceptionalGraph exceptional_graph(const Universe& u) {
  if (!u.has_taxonomy()) throw std::logic_error("exceptional graph needs the taxonomy pass");
  ExceptionalGraph g;
  std::vector<std::uint64_t> ranks;
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    if (!u.classes().exceptional_at(r)) return;
    ranks.push_back(r);
    ExceptionalNode node;
    node.pos = x;
    node.exact_p = u.classes().exact_p_at(r);
    node.pair_class = u.classes().pair_class_at(r);
    g.nodes.push_back(node);
  });
  const auto& index = u.exact().index();
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
    std::vector<std::uint32_t> targets;
    for_each_move(u.rule(), g.nodes[i].pos, [&](std::uint32_t, const Position& y) {
      const std::uint64_t ry = index.rank_unchecked(y.begin());
      if (!u.classes().exceptional_at(ry)) return;
      ++g.nodes[i].out_moves;
      const auto it = std::lower_bound(ranks.begin(), ranks.end(), ry);
      targets.push_back(static_cast<std::uint32_t>(it - ranks.begin()));
    });
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    g.nodes[i].out_distinct = static_cast<std::uint32_t>(targets.size());
    for (std::uint32_t t : targets) {
      g.edges.emplace_back(i, t);
      ++g.nodes[t].in_degree;
    }
  }
  return g;
}

}  // namespace xnim
