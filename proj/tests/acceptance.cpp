// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// iff any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "xnim/xnim.hpp"

using namespace xnim;

namespace {

struct Outcome_ {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome_()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome_ r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !r.ok;
  std::printf("%s %2d %s: %s [%.1fs]\n", r.ok ? "PASS" : "FAIL", id, title.c_str(), r.detail.c_str(), s);
  std::fflush(stdout);
}

std::string summary(const CheckReport& r) {
  std::ostringstream os;
  os << r.check << " scanned " << r.scanned << ", violations " << r.violations;
  return os.str();
}

// Table against brute force on every position with at most `max_total` stones.
bool agrees_with_brute_force(const GameRule& rule, std::uint64_t max_total, std::uint64_t& checked) {
  const SolveTable t = solve(rule, static_cast<Pile>(max_total));
  BruteForceSolver bf(rule);
  bool ok = true;
  for_each_ranked(t.index(), 0, t.bound(), [&](std::uint64_t r, const Position& x) {
    if (x.total() > max_total) return;
    ++checked;
    ok = ok && t.is_p_at(r) == (bf.outcome(x) == Outcome::P) && t.remoteness_at(r) == bf.remoteness(x);
  });
  return ok;
}

// Closed form against brute force over every position with piles <= bound.
bool closed_form_matches(const GameRule& rule, Pile bound, const std::function<bool(const Position&)>& is_p,
                         std::uint64_t& checked) {
  BruteForceSolver bf(rule);
  bool ok = true;
  for_each_ranked(RankedIndex(rule.n, bound), 0, bound, [&](std::uint64_t, const Position& x) {
    ++checked;
    ok = ok && (bf.outcome(x) == Outcome::P) == is_p(x);
  });
  return ok;
}

template <class F>
auto timed(const char* what, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto v = f();
  std::printf("note  built %s [%.1fs]\n", what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return v;
}

}  // namespace

int main() {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  criterion(1, "oracle equivalence", [] {
    std::uint64_t a = 0, b = 0;
    const bool ok = agrees_with_brute_force(GameRule::exact(5, 2), 20, a) &&
                    agrees_with_brute_force(GameRule::moore(4, 2), 16, b);
    return Outcome_{ok, "exact(5,=2) " + std::to_string(a) + " positions, moore(4,<=2) " + std::to_string(b) +
                            " positions, outcome and remoteness"};
  });

  criterion(2, "closed forms", [] {
    std::uint64_t c = 0;
    bool ok = closed_form_matches(GameRule::nim(3), 16, bouton_is_p, c);
    ok &= closed_form_matches(GameRule::moore(4, 2), 12, [](const Position& x) { return moore_is_p(x, 2); }, c);
    ok &= closed_form_matches(GameRule::moore(3, 2), 8, [](const Position& x) { return moore_is_p(x, 2); }, c);
    ok &= closed_form_matches(GameRule::moore(5, 3), 8, [](const Position& x) { return moore_is_p(x, 3); }, c);
    SolveOptions o;
    o.remoteness = false;
    const CheckReport t10 = check_thm10(solve(GameRule::exact(5, 2), 30, o));
    ok &= t10.passed();
    return Outcome_{ok, std::to_string(c) + " brute-force positions; " + summary(t10)};
  });

  criterion(3, "constructive moore move", [] {
    const CheckReport r = check_moore_winning_moves(4, 2, 20);
    return Outcome_{r.passed(), summary(r) + ", N-positions " + r.stats["n_positions"].dump()};
  });

  {
    UniverseOptions o;
    o.threads = threads;
    o.remoteness = true;
    const Universe u40 = timed("B=40 universe with remoteness", [&] { return Universe::build(40, o); });

    criterion(4, "no *P to *P moves at B=40", [&] {
      const CheckReport r = check_no_pp_moves(u40);
      return Outcome_{r.passed(), summary(r) + ", leader-changing " + r.stats["leader_changing_violations"].dump() +
                                      ", leader-preserving " + r.stats["leader_preserving_violations"].dump()};
    });

    criterion(5, "balanced reduction and xi_3 at B=40", [&] {
      const CheckReport r = check_obs8_and_conjecture(u40);
      return Outcome_{r.passed(), summary(r) + ", balanced " + r.stats["balanced"].dump() + " (NP " +
                                      r.stats["np"].dump() + ", PP " + r.stats["pp"].dump() + ")"};
    });

    criterion(9, "exceptional N-positions at B=40", [&] {
      const CheckReport r = check_exceptional_observations(exceptional_graph(u40), 40);
      return Outcome_{r.passed(), summary(r) + ", N-nodes " + r.stats["exceptional_n_nodes"].dump() +
                                      ", degree semantics " + r.stats["obs6_semantics"].get<std::string>()};
    });

    criterion(10, "remoteness parity and peeling", [&] {
      bool ok = true;
      std::uint64_t scanned = 0;
      for (const SolveTable* t : {&u40.exact(), &u40.moore()})
        for (std::uint64_t r = 0; r < t->size(); ++r, ++scanned) ok = ok && t->is_p_at(r) == (t->remoteness_at(r) % 2 == 0);
      const GameRule rule = GameRule::exact(5, 2);
      const auto peeled = oracle::peel(rule, 12);
      BruteForceSolver bf(rule);
      std::uint64_t peel_ok = 0;
      for (const auto& [x, l] : peeled) {
        const bool same = l.p == (bf.outcome(x) == Outcome::P) && l.remoteness == bf.remoteness(x) &&
                          l.remoteness == u40.exact().remoteness(x);
        peel_ok += same;
      }
      ok = ok && peel_ok == peeled.size();
      return Outcome_{ok, "parity over " + std::to_string(scanned) + " positions; peeling agrees on " +
                              std::to_string(peel_ok) + "/" + std::to_string(peeled.size())};
    });

    const RemotenessComparison cmp = remoteness_comparison(u40);
    std::printf("note    remoteness at B=40 (report only): equal fraction %s, max exceptional |difference| %s\n",
                cmp.report.stats["equal_fraction"].dump().c_str(),
                cmp.report.stats["exceptional_max_abs_difference"].dump().c_str());
  }

  {
    const Universe u30 = Universe::build(30, {threads, false, true});
    const CheckReport quick = verify_propositions(u30);
    std::printf("note  6 at B=30: %s\n", quick.notes.empty() ? "nothing skipped" : quick.notes.back().c_str());

    const Universe u85 = timed("B=85 universe", [&] { return Universe::build(85, {threads, false, true}); });
    criterion(6, "proposition test vectors at B=85", [&] {
      const CheckReport r = verify_propositions(u85, true);
      std::string detail = summary(r);
      for (const auto& n : r.notes) detail += "; " + n;
      return Outcome_{r.passed() && r.scanned == 7, detail};
    });

    criterion(7, "PN share of P-positions at B=85", [&] {
      const ClassCountSeries s = class_counts(u85);
      const double share = s.pn_share_of_p();
      const auto t = s.totals();
      char buf[160];
      std::snprintf(buf, sizeof buf, "|PN|/(|PN|+|PP|) = %.4f (PP %llu, PN %llu), target 0.20 +/- 0.02", share,
                    static_cast<unsigned long long>(t[0]), static_cast<unsigned long long>(t[1]));
      return Outcome_{std::abs(share - 0.20) <= 0.02, buf};
    });
  }

  criterion(8, "ratio series rise and fall at B=60", [&] {
    UniverseOptions o;
    o.threads = threads;
    o.remoteness = false;
    o.taxonomy = false;
    const ClassCountSeries s = class_counts(Universe::build(60, o));
    const auto a = s.pp_pn_series(), b = s.mixed_series();
    const CheckReport ra = check_nonmonotonicity(a, "pp_pn", 60), rb = check_nonmonotonicity(b, "mixed", 60);
    return Outcome_{ra.passed() && rb.passed(), "PP/PN rises " + ra.stats["rises"].dump() + " falls " +
                                                    ra.stats["falls"].dump() + "; mixed rises " +
                                                    rb.stats["rises"].dump() + " falls " + rb.stats["falls"].dump()};
  });

  criterion(11, "determinism and persistence", [] {
    SolveOptions one, many;
    many.threads = 8;
    bool ok = true;
    for (const GameRule& rule : {GameRule::exact(5, 2), GameRule::moore(4, 2)}) {
      const SolveTable a = solve(rule, 20, one), b = solve(rule, 20, many);
      const std::string ea = encode_table(a), eb = encode_table(b);
      ok = ok && ea == eb && encode_table(decode_table(ea)) == ea && decode_table(ea) == a;
    }
    return Outcome_{ok, "1 vs 8 threads byte-identical, round trip preserved"};
  });

  criterion(12, "bound stability B=20 vs B=30", [&] {
    UniverseOptions o;
    o.threads = threads;
    const Universe a = Universe::build(20, o), b = Universe::build(30, o);
    std::uint64_t bad = 0;
    for_each_ranked(a.exact().index(), 0, 20, [&](std::uint64_t r, const Position& x) {
      const std::uint64_t s = b.rank_of(x);
      bad += a.classes().flags_at(r) != b.classes().flags_at(s);
      bad += a.exact().remoteness_at(r) != b.exact().remoteness_at(s);
      bad += a.moore().remoteness_at(a.moore_rank_of_reduction(x)) != b.moore().remoteness_at(b.moore_rank_of_reduction(x));
    });
    return Outcome_{bad == 0, std::to_string(a.size()) + " common positions, mismatches " + std::to_string(bad)};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
