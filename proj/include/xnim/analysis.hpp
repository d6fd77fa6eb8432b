#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xnim/bits.hpp"
#include "xnim/classify.hpp"
#include "xnim/error.hpp"
#include "xnim/rules.hpp"
#include "xnim/solver.hpp"

namespace xnim {

// Result of one check. Passes iff no violation was recorded; at most
// kMaxSamples violating positions are kept.
struct CheckReport {
  static constexpr std::size_t kMaxSamples = 64;

  std::string check;
  Pile bound = 0;
  std::uint64_t violations = 0;
  std::uint64_t scanned = 0;
  std::vector<Position> counterexamples;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  std::vector<std::string> notes;

  CheckReport() = default;
  CheckReport(std::string name, Pile b) : check(std::move(name)), bound(b) {}

  bool passed() const noexcept { return violations == 0; }

  void fail(const Position& x) {
    ++violations;
    if (counterexamples.size() < kMaxSamples) counterexamples.push_back(x);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["bound"] = bound;
    j["passed"] = passed();
    auto ce = nlohmann::ordered_json::array();
    for (const auto& x : counterexamples) ce.push_back(std::vector<Pile>(x.begin(), x.end()));
    j["counterexamples"] = ce;
    nlohmann::ordered_json s = stats;
    s["violations"] = violations;
    s["scanned"] = scanned;
    j["stats"] = s;
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Class counts and ratio series

inline double safe_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return num == 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

struct ClassCountSeries {
  // rows[s][c]: positions with s stones in class c (PP, PN, NP, NN order)
  std::vector<std::array<std::uint64_t, 4>> rows;

  std::uint64_t count(std::size_t stones, PairClass c) const { return rows[stones][static_cast<int>(c)]; }

  double ratio_pp_pn(std::size_t s) const { return safe_ratio(count(s, PairClass::PP), count(s, PairClass::PN)); }
  double ratio_mixed(std::size_t s) const {
    return safe_ratio(count(s, PairClass::NP) + count(s, PairClass::PN),
                      count(s, PairClass::NN) + count(s, PairClass::PP));
  }

  std::vector<double> pp_pn_series() const {
    std::vector<double> out;
    for (std::size_t s = 0; s < rows.size(); ++s) out.push_back(ratio_pp_pn(s));
    return out;
  }
  std::vector<double> mixed_series() const {
    std::vector<double> out;
    for (std::size_t s = 0; s < rows.size(); ++s) out.push_back(ratio_mixed(s));
    return out;
  }

  std::array<std::uint64_t, 4> totals() const {
    std::array<std::uint64_t, 4> t{};
    for (const auto& r : rows)
      for (int c = 0; c < 4; ++c) t[c] += r[c];
    return t;
  }

  // |PN| / (|PN| + |PP|): share of exact P-positions that Moore's criterion
  // misjudges.
  double pn_share_of_p() const {
    const auto t = totals();
    return safe_ratio(t[1], t[0] + t[1]);
  }
  // |PN| / all positions.
  double pn_share_of_all() const {
    const auto t = totals();
    return safe_ratio(t[1], t[0] + t[1] + t[2] + t[3]);
  }
};

inline ClassCountSeries class_counts(const Universe& u) {
  ClassCountSeries series;
  series.rows.assign(static_cast<std::size_t>(u.rule().n) * u.bound() + 1, {});
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    ++series.rows[x.total()][static_cast<int>(u.classes().pair_class_at(r))];
  });
  return series;
}

// Passes iff the finite values contain at least one strict rise and one strict
// fall between consecutive finite entries.
inline CheckReport check_nonmonotonicity(std::span<const double> series, std::string name = "nonmonotonicity",
                                         Pile bound = 0) {
  CheckReport rep(std::move(name), bound);
  std::optional<double> prev;
  std::uint64_t rises = 0, falls = 0, skipped = 0;
  for (double v : series) {
    ++rep.scanned;
    if (!std::isfinite(v)) {
      ++skipped;
      continue;
    }
    if (prev) {
      if (v > *prev) ++rises;
      if (v < *prev) ++falls;
    }
    prev = v;
  }
  rep.stats["rises"] = rises;
  rep.stats["falls"] = falls;
  rep.stats["non_finite_skipped"] = skipped;
  if (rises == 0 || falls == 0) {
    ++rep.violations;
    rep.notes.push_back(rises == 0 ? "series never rises" : "series never falls");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Structural checks over a solved universe

// Over positions whose reduction has every column sum divisible by k+1:
// NP iff xi_{k+1}(reduced) > leader, PP iff xi_{k+1}(reduced) <= leader.
inline CheckReport check_obs8_and_conjecture(const Universe& u) {
  CheckReport rep("obs8", u.bound());
  const unsigned k = u.rule().k;
  std::uint64_t balanced = 0, np = 0, pp = 0, criterion_mismatch = 0;
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    ++rep.scanned;
    const Position red = reduce(x);
    const MooreVector mv = moore_vector(red);
    bool is_balanced = true;
    for (unsigned s : mv.sums) is_balanced = is_balanced && s % (k + 1) == 0;
    if (is_balanced != u.classes().moore_p_at(r)) {
      ++criterion_mismatch;
      rep.fail(x);
      return;
    }
    if (!is_balanced) return;
    ++balanced;
    const bool predicted_np = xi(mv, k + 1) > x.leader();
    const PairClass c = u.classes().pair_class_at(r);
    (c == PairClass::NP ? np : pp) += 1;
    if ((c == PairClass::NP) != predicted_np) rep.fail(x);
  });
  rep.stats["balanced"] = balanced;
  rep.stats["np"] = np;
  rep.stats["pp"] = pp;
  rep.stats["criterion_mismatch"] = criterion_mismatch;
  return rep;
}

// No exact move joins two positions with moore-P reductions. Violations are
// split by whether the move touches the last (leader) pile index.
inline CheckReport check_no_pp_moves(const Universe& u) {
  CheckReport rep("lemma11", u.bound());
  const auto& index = u.exact().index();
  const std::uint32_t leader_bit = 1u << (u.rule().n - 1);
  std::uint64_t sources = 0, moves = 0, changing = 0, preserving = 0;
  for_each_ranked(index, 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    ++rep.scanned;
    if (!u.classes().moore_p_at(r)) return;
    ++sources;
    bool bad = false;
    for_each_move(u.rule(), x, [&](std::uint32_t mask, const Position& y) {
      ++moves;
      if (!u.classes().moore_p_at(index.rank_unchecked(y.begin()))) return;
      bad = true;
      ((mask & leader_bit) ? changing : preserving) += 1;
    });
    if (bad) rep.fail(x);
  });
  rep.stats["star_p_positions"] = sources;
  rep.stats["moves_examined"] = moves;
  rep.stats["leader_changing_violations"] = changing;
  rep.stats["leader_preserving_violations"] = preserving;
  return rep;
}

// Number of column indices at which the two matrices differ (common width).
inline unsigned differing_columns(const BoutonMatrix& a, const BoutonMatrix& b) {
  const unsigned w = std::max(a.width, b.width);
  const auto ca = a.columns(w), cb = b.columns(w);
  unsigned d = 0;
  for (unsigned j = 0; j < w; ++j) d += ca[j] != cb[j];
  return d;
}

// Moves from positions of class `source` whose reduced matrix is a nontrivial
// column permutation of the source's reduced matrix. With source = NP this is
// expected to find nothing.
inline CheckReport check_obs5_column_permutation(const Universe& u, PairClass source = PairClass::NP) {
  CheckReport rep(std::string("obs5_") + to_string(source), u.bound());
  std::uint64_t sources = 0, events = 0;
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    ++rep.scanned;
    if (u.classes().pair_class_at(r) != source) return;
    ++sources;
    const BoutonMatrix a = bouton_matrix(reduce(x));
    bool hit = false;
    for (const Position& y : successors(u.rule(), x)) {
      if (is_column_permutation(a, bouton_matrix(reduce(y)))) {
        ++events;
        hit = true;
      }
    }
    if (hit) rep.fail(x);
  });
  rep.stats["sources"] = sources;
  rep.stats["permutation_moves"] = events;
  return rep;
}

// Concrete position labels and matrix relations quoted for the exact(5,=2)
// versus moore(4,<=2) comparison. Items needing piles beyond the bound are
// skipped and listed; with `strict` any skip raises InsufficientBoundError.
inline CheckReport verify_propositions(const Universe& u, bool strict = false) {
  CheckReport rep("props", u.bound());
  if (u.rule() != GameRule::exact(5, 2)) throw std::invalid_argument("propositions concern exact(5,=2)");
  const GameRule rule = u.rule();
  auto matrix = [](const Position& x) { return bouton_matrix(reduce(x)); };
  auto label = [&](const Position& x, PairClass want, const std::string& item) {
    const PairClass got = u.pair_class(x);
    if (got != want) {
      rep.fail(x);
      rep.notes.push_back(item + ": (" + x.to_string() + ") is " + to_string(got) + ", expected " + to_string(want));
      return false;
    }
    return true;
  };
  auto expect = [&](bool ok, const Position& x, const std::string& what) {
    if (!ok) {
      rep.fail(x);
      rep.notes.push_back(what);
    }
    return ok;
  };

  struct Item {
    std::string name;
    std::vector<Position> positions;
    std::function<bool()> run;
  };
  const Position p3a{10, 19, 24, 26, 26}, p3b{9, 19, 24, 25, 26};
  const Position p4a{14, 16, 25, 25, 25}, p4b{7, 8, 25, 25, 25};
  const Position p5a{12, 17, 20, 21, 21}, p5b{12, 18, 20, 22, 22};
  const Position p6a{6, 9, 10, 11, 11}, p6b{12, 17, 20, 21, 21};
  const Position p7a{12, 17, 20, 21, 21}, p7b{10, 17, 18, 19, 30};
  const Position p8a{6, 9, 10, 11, 59}, p8b{12, 18, 20, 22, 22};
  const Position p9a{20, 33, 36, 37, 37}, p9b{40, 66, 72, 74, 74};

  std::vector<Item> items;
  items.push_back({"prop3", {p3a, p3b}, [&] {
                     bool ok = label(p3a, PairClass::PN, "prop3") & label(p3b, PairClass::NN, "prop3");
                     ok &= expect(move_exists_between(rule, p3a, p3b), p3a, "prop3: no move between the pair");
                     ok &= expect(is_column_permutation(matrix(p3a), matrix(p3b)) &&
                                      differing_columns(matrix(p3a), matrix(p3b)) == 2,
                                  p3a, "prop3: reduced matrices are not a two-column permutation");
                     return ok;
                   }});
  items.push_back({"prop4", {p4a, p4b}, [&] {
                     bool ok = label(p4a, PairClass::PN, "prop4") & label(p4b, PairClass::NN, "prop4");
                     ok &= expect(move_exists_between(rule, p4a, p4b), p4a, "prop4: no move between the pair");
                     ok &= expect(is_column_permutation(matrix(p4a), matrix(p4b)) &&
                                      differing_columns(matrix(p4a), matrix(p4b)) == 3,
                                  p4a, "prop4: reduced matrices are not a three-column permutation");
                     return ok;
                   }});
  items.push_back({"prop5", {p5a, p5b}, [&] {
                     bool ok = label(p5a, PairClass::PN, "prop5") & label(p5b, PairClass::PN, "prop5");
                     ok &= expect(is_column_permutation(matrix(p5a), matrix(p5b)) &&
                                      differing_columns(matrix(p5a), matrix(p5b)) == 2,
                                  p5a, "prop5: reduced matrices are not a two-column permutation");
                     return ok;
                   }});
  items.push_back({"prop6", {p6a, p6b}, [&] {
                     bool ok = label(p6a, PairClass::PN, "prop6") & label(p6b, PairClass::PN, "prop6");
                     ok &= expect(!zero_column_insertions(matrix(p6a), matrix(p6b)).empty(), p6a,
                                  "prop6: no zero-column insertion relates the reduced matrices");
                     return ok;
                   }});
  items.push_back({"prop7", {p7a, p7b}, [&] {
                     bool ok = label(p7a, PairClass::PN, "prop7") & label(p7b, PairClass::NN, "prop7");
                     ok &= expect(is_column_permutation(matrix(p7a), matrix(p7b)), p7a,
                                  "prop7: reduced matrices are not column permutations");
                     return ok;
                   }});
  items.push_back({"prop8", {p8a, p8b}, [&] {
                     bool ok = label(p8a, PairClass::NN, "prop8") & label(p8b, PairClass::PN, "prop8");
                     const auto at = zero_column_insertions(matrix(p8a), matrix(p8b));
                     ok &= expect(!at.empty() && at.front() == 0, p8a,
                                  "prop8: reduced matrices do not differ by a zero column at the low end");
                     rep.stats["prop8_game_move_exists"] = move_exists_between(rule, p8a, p8b);
                     return ok;
                   }});
  items.push_back({"prop9", {p9a, p9b}, [&] {
                     bool ok = label(p9a, PairClass::PN, "prop9") & label(p9b, PairClass::PN, "prop9");
                     const auto at = zero_column_insertions(matrix(p9a), matrix(p9b));
                     ok &= expect(!at.empty() && at.front() == 0, p9a,
                                  "prop9: reduced matrices do not differ by a zero column at the low end");
                     return ok;
                   }});

  std::vector<std::string> skipped;
  for (const Item& item : items) {
    const bool fits = std::all_of(item.positions.begin(), item.positions.end(),
                                  [&](const Position& x) { return x.leader() <= u.bound(); });
    if (!fits) {
      Pile need = 0;
      for (const auto& x : item.positions) need = std::max(need, x.leader());
      skipped.push_back(item.name + " (needs bound " + std::to_string(need) + ")");
      rep.stats[item.name] = "skipped";
      continue;
    }
    ++rep.scanned;
    rep.stats[item.name] = item.run() ? "pass" : "fail";
  }
  if (!skipped.empty()) {
    std::string msg = "insufficient bound " + std::to_string(u.bound()) + "; unverifiable:";
    for (const auto& s : skipped) msg += " " + s;
    if (strict) throw InsufficientBoundError(msg);
    rep.notes.push_back(msg);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Periodicity

struct Period {
  bool found = false;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::size_t repetitions = 0;  // full periods in the periodic tail
};

// Smallest period p (then smallest preperiod q) such that seq[i] == seq[i+p]
// for all i >= q and the tail from q holds at least `min_reps` full periods.
template <class T>
Period detect_period(std::span<const T> seq, std::size_t min_reps = 3) {
  const std::size_t len = seq.size();
  for (std::size_t p = 1; p * min_reps <= len; ++p) {
    std::size_t q = 0;  // one past the last mismatch
    for (std::size_t i = len - p; i-- > 0;) {
      if (!(seq[i] == seq[i + p])) {
        q = i + 1;
        break;
      }
    }
    if (len - q >= min_reps * p) return {true, q, p, (len - q) / p};
  }
  return {};
}

struct PeriodicityReport {
  Pile x1 = 0;
  std::optional<Pile> x2;  // set when the second pile is also held fixed
  std::size_t length = 0;
  Period period;
};

// PN positions with first pile x1 (and optionally second pile x2), in
// lexicographic order; the sequence is their consecutive-pile gaps from the
// second pile on.
inline PeriodicityReport detect_periodicity(const Universe& u, Pile x1, std::optional<Pile> x2 = std::nullopt) {
  if (x1 > u.bound()) throw BoundError("x1 exceeds bound", x1);
  std::vector<Position> pn;
  for_each_ranked(u.exact().index(), x1, u.bound(), [&](std::uint64_t r, const Position& x) {
    if (x[0] == x1 && (!x2 || x[1] == *x2) && u.classes().pair_class_at(r) == PairClass::PN) pn.push_back(x);
  });
  std::sort(pn.begin(), pn.end());
  std::vector<std::vector<Pile>> gaps;
  for (const auto& x : pn) {
    std::vector<Pile> g;
    for (std::size_t i = 2; i < x.size(); ++i) g.push_back(x[i] - x[i - 1]);
    gaps.push_back(std::move(g));
  }
  PeriodicityReport rep;
  rep.x1 = x1;
  rep.x2 = x2;
  rep.length = gaps.size();
  rep.period = detect_period(std::span<const std::vector<Pile>>(gaps));
  return rep;
}

// ---------------------------------------------------------------------------
// Remoteness comparison

struct RemotenessComparison {
  CheckReport report;
  std::map<long, std::uint64_t> overall;      // R_exact(x) - R_moore(reduced) -> count
  std::map<long, std::uint64_t> exceptional;  // same, exceptional positions only
};

inline RemotenessComparison remoteness_comparison(const Universe& u) {
  if (!u.has_remoteness()) throw std::logic_error("remoteness comparison needs remoteness tables");
  RemotenessComparison out{CheckReport("remoteness", u.bound()), {}, {}};
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    ++out.report.scanned;
    const long d = static_cast<long>(u.exact().remoteness_at(r)) -
                   static_cast<long>(u.moore().remoteness_at(u.moore_rank_of_reduction(x)));
    ++out.overall[d];
    if (u.has_taxonomy() && u.classes().exceptional_at(r)) ++out.exceptional[d];
  });
  const double equal = safe_ratio(out.overall.count(0) ? out.overall.at(0) : 0, out.report.scanned);
  long max_exc = 0;
  for (const auto& [d, c] : out.exceptional) max_exc = std::max(max_exc, std::labs(d));
  auto& s = out.report.stats;
  s["equal_fraction"] = equal;
  s["equal_dominates"] = equal > 0.5;
  s["exceptional_max_abs_difference"] = max_exc;
  s["exceptional_difference_at_least_2"] = max_exc >= 2;
  auto hist = [](const std::map<long, std::uint64_t>& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [d, c] : m) j[std::to_string(d)] = c;
    return j;
  };
  s["histogram"] = hist(out.overall);
  s["exceptional_histogram"] = hist(out.exceptional);
  if (equal <= 0.5) out.report.notes.push_back("equal remoteness is not the majority at this bound");
  if (max_exc < 2) out.report.notes.push_back("no exceptional position differs by 2 or more at this bound");
  return out;
}

// Every exceptional N-node is NP, and its out-degree is divisible by 3 under
// distinct-successor counting or, failing that, move counting. Edges must
// alternate between P and N nodes.
inline CheckReport check_exceptional_observations(const ExceptionalGraph& g, Pile bound = 0) {
  CheckReport rep("obs67", bound);
  std::uint64_t n_nodes = 0, obs7_bad = 0, distinct_bad = 0, moves_bad = 0;
  auto degrees = nlohmann::ordered_json::array();
  for (const auto& node : g.nodes) {
    ++rep.scanned;
    if (node.exact_p) continue;
    ++n_nodes;
    if (node.pair_class != PairClass::NP) {
      ++obs7_bad;
      rep.fail(node.pos);
    }
    distinct_bad += node.out_distinct % 3 != 0;
    moves_bad += node.out_moves % 3 != 0;
    degrees.push_back({{"pos", node.pos.to_string()},
                       {"class", to_string(node.pair_class)},
                       {"out_distinct", node.out_distinct},
                       {"out_moves", node.out_moves}});
  }
  // Outcomes alternate along edges: no edge joins two P or two N nodes.
  std::uint64_t same_outcome = 0;
  for (const auto& [a, b] : g.edges) {
    if (g.nodes[a].exact_p != g.nodes[b].exact_p) continue;
    ++same_outcome;
    rep.fail(g.nodes[a].pos);
  }
  rep.stats["exceptional_nodes"] = g.nodes.size();
  rep.stats["exceptional_n_nodes"] = n_nodes;
  rep.stats["edges"] = g.edges.size();
  rep.stats["isolated"] = g.isolated_count();
  rep.stats["obs7_violations"] = obs7_bad;
  rep.stats["alternation_violations"] = same_outcome;
  rep.stats["obs6_distinct_violations"] = distinct_bad;
  rep.stats["obs6_moves_violations"] = moves_bad;
  std::string semantics = distinct_bad == 0 ? "distinct-successors" : moves_bad == 0 ? "moves" : "none";
  rep.stats["obs6_semantics"] = semantics;
  if (distinct_bad != 0) {
    rep.notes.push_back("out-degree not divisible by 3 under distinct-successor counting for " +
                        std::to_string(distinct_bad) + " nodes; move counting: " + std::to_string(moves_bad));
  }
  if (semantics == "none") {
    for (const auto& node : g.nodes)
      if (!node.exact_p && node.out_distinct % 3 != 0 && node.out_moves % 3 != 0) rep.fail(node.pos);
  }
  rep.stats["degrees"] = degrees;
  return rep;
}

// ---------------------------------------------------------------------------
// Closed-form criteria against solved tables

inline CheckReport check_bouton(const SolveTable& t) {
  CheckReport rep("bouton", t.bound());
  for_each_ranked(t.index(), 0, t.bound(), [&](std::uint64_t r, const Position& x) {
    ++rep.scanned;
    if (t.is_p_at(r) != bouton_is_p(x)) rep.fail(x);
  });
  return rep;
}

inline CheckReport check_moore(const SolveTable& t) {
  CheckReport rep("moore", t.bound());
  for_each_ranked(t.index(), 0, t.bound(), [&](std::uint64_t r, const Position& x) {
    ++rep.scanned;
    if (t.is_p_at(r) != moore_is_p(x, t.rule().k)) rep.fail(x);
  });
  return rep;
}

// moore_winning_move from every criterion-N position is a legal move to a
// criterion-P position.
inline CheckReport check_moore_winning_moves(unsigned n, unsigned k, Pile bound) {
  CheckReport rep("moore_winning_move", bound);
  const GameRule rule = GameRule::moore(n, k);
  std::uint64_t n_positions = 0;
  for_each_ranked(RankedIndex(n, bound), 0, bound, [&](std::uint64_t, const Position& x) {
    ++rep.scanned;
    if (moore_is_p(x, k)) return;
    ++n_positions;
    const Position y = moore_winning_move(x, k);
    if (!move_exists_between(rule, x, y) || !moore_is_p(y, k)) rep.fail(x);
  });
  rep.stats["n_positions"] = n_positions;
  return rep;
}

inline CheckReport check_thm10(const SolveTable& t) {
  CheckReport rep("thm10", t.bound());
  if (t.rule() != GameRule::exact(5, 2)) throw std::invalid_argument("closed form concerns exact(5,=2)");
  for_each_ranked(t.index(), 0, t.bound(), [&](std::uint64_t r, const Position& x) {
    if (x[0] != 0) return;
    ++rep.scanned;
    if (t.is_p_at(r) != thm10_is_p(x)) rep.fail(x);
  });
  return rep;
}

}  // namespace xnim
