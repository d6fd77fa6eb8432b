// xnim: solve, classify, verify and analyze exact nim against Moore's nim.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xnim/xnim.hpp"

namespace fs = std::filesystem;
using namespace xnim;

namespace {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kResource = 3,
  kOutOfBound = 4,
  kInsufficientBound = 5,
};

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  unsigned threads = 1;
  std::string cache_dir;
  bool no_solve = false;
  bool quiet = false;
  unsigned n = 5;
  unsigned k = 2;
  long bound = -1;  // -1: not given
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("XNIM_CACHE"); env && *env) return env;
  return ".xnim-cache";
}

Pile checked_bound(long bound) {
  if (bound < 0) throw UsageError("--bound is required");
  if (bound > static_cast<long>(kMaxBound)) throw UsageError("--bound must be at most 65535");
  return static_cast<Pile>(bound);
}

// Tables keyed by (family, n, k, bound), kept as files in the cache directory.
class TableCache {
 public:
  explicit TableCache(const RunConfig& cfg) : cfg_(cfg) {}

  fs::path path_for(const GameRule& rule, Pile bound) const {
    return fs::path(cfg_.cache_dir) / (to_string(rule.family) + "-n" + std::to_string(rule.n) + "-k" +
                                       std::to_string(rule.k) + "-b" + std::to_string(bound) + ".xnim");
  }

  SolveTable get(const GameRule& rule, Pile bound, bool need_remoteness) {
    const fs::path path = path_for(rule, bound);
    std::optional<SolveTable> table;
    std::error_code ec;
    if (fs::exists(path, ec)) {
      try {
        table = read_table(path.string());
        if (table->rule() != rule || table->bound() != bound) table.reset();
      } catch (const Error& e) {
        note("ignoring unreadable cache file " + path.string() + ": " + e.what());
      }
    }
    if (!table) {
      if (cfg_.no_solve)
        throw ResourceError("no cached table for " + rule.name() + " bound " + std::to_string(bound) +
                            " and --no-solve is set");
      const auto t0 = std::chrono::steady_clock::now();
      SolveOptions opts;
      opts.threads = cfg_.threads;
      opts.remoteness = need_remoteness;
      table = solve(rule, bound, opts);
      note("solved " + rule.name() + " bound " + std::to_string(bound) + " in " + fmt_seconds(seconds_since(t0)));
      store(*table, path);
    } else if (need_remoteness && !table->has_remoteness()) {
      if (cfg_.no_solve) throw ResourceError("cached table lacks remoteness and --no-solve is set");
      SolveOptions opts;
      opts.threads = cfg_.threads;
      solve_remoteness(*table, opts);
      store(*table, path);
    }
    return std::move(*table);
  }

  Universe universe(Pile bound, bool need_remoteness, bool taxonomy) {
    UniverseOptions opts;
    opts.threads = cfg_.threads;
    opts.remoteness = need_remoteness;
    opts.taxonomy = taxonomy;
    return Universe(get(GameRule::exact(cfg_.n, cfg_.k), bound, need_remoteness),
                    get(GameRule::moore(cfg_.n - 1, cfg_.k), bound, need_remoteness), opts);
  }

  static std::string fmt_seconds(double s) {
    std::ostringstream os;
    os.precision(3);
    os << s << "s";
    return os.str();
  }

 private:
  void note(const std::string& msg) const {
    if (!cfg_.quiet) std::cerr << msg << '\n';
  }

  void store(const SolveTable& t, const fs::path& path) const {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    try {
      write_table(t, path.string());
    } catch (const Error& e) {
      note(std::string("not caching: ") + e.what());
    }
  }

  const RunConfig& cfg_;
};

// Parses "a,b,c"; reports when the input was not already sorted.
Position parse_position_arg(const std::string& text, unsigned n, bool quiet) {
  Position x;
  try {
    x = parse_position(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (x.size() != n)
    throw UsageError("position must have " + std::to_string(n) + " piles, got " + std::to_string(x.size()));
  std::string canon = x.to_string();
  std::string raw = text;
  raw.erase(std::remove(raw.begin(), raw.end(), ' '), raw.end());
  if (raw != canon && !quiet) std::cerr << "note: position canonicalized to " << canon << '\n';
  return x;
}

void print_report(const CheckReport& r) {
  std::cout << (r.passed() ? "PASS " : "FAIL ") << r.check << " (bound " << r.bound << ", scanned " << r.scanned;
  if (!r.passed()) std::cout << ", violations " << r.violations;
  std::cout << ")\n";
  for (const auto& x : r.counterexamples) std::cout << "  counterexample " << x.to_string() << '\n';
  for (const auto& n : r.notes) std::cout << "  note: " << n << '\n';
}

// ---------------------------------------------------------------------------

int cmd_solve(RunConfig& cfg, const std::string& game, const std::string& out, bool no_remoteness, bool k_given) {
  const Pile bound = checked_bound(cfg.bound);
  TableCache cache(cfg);
  std::vector<GameRule> rules;
  if (!game.empty()) {
    const Family f = parse_family(game);
    rules.push_back(GameRule::make(f, cfg.n, f == Family::nim && !k_given ? 1 : cfg.k));
  } else {
    rules.push_back(GameRule::exact(cfg.n, cfg.k));
    rules.push_back(GameRule::moore(cfg.n - 1, cfg.k));
  }
  if (!out.empty() && rules.size() != 1) throw UsageError("--out needs a single --game");
  for (const GameRule& rule : rules) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveTable t = cache.get(rule, bound, !no_remoteness);
    std::cout << rule.name() << " bound " << bound << ": " << t.size() << " positions, " << t.count_p()
              << " P-positions (" << TableCache::fmt_seconds(seconds_since(t0)) << ")";
    if (!out.empty()) {
      write_table(t, out);
      std::cout << " -> " << out;
    } else {
      std::cout << " -> " << cache.path_for(rule, bound).string();
    }
    std::cout << '\n';
  }
  return kOk;
}

int cmd_query(RunConfig& cfg, const std::string& text, bool json) {
  const Position x = parse_position_arg(text, cfg.n, cfg.quiet);
  Pile bound = x.leader();
  if (cfg.bound >= 0) {
    bound = checked_bound(cfg.bound);
    if (x.leader() > bound)
      throw BoundError("position (" + x.to_string() + ") needs bound >= " + std::to_string(x.leader()), x.leader());
  }
  TableCache cache(cfg);
  const Universe u = cache.universe(bound, true, true);
  const std::uint64_t r = u.rank_of(x);
  const Position red = reduce(x);
  const MooreVector mv = moore_vector(red);
  bool balanced = true;
  for (unsigned s : mv.sums) balanced = balanced && s % (cfg.k + 1) == 0;
  const std::uint64_t xi_v = xi(mv, cfg.k + 1);
  std::optional<Position> move;
  if (!is_terminal(u.rule(), x)) move = best_move(u.exact(), x);
  const auto reg = u.classes().regularity_at(r);

  nlohmann::ordered_json j;
  j["position"] = x.to_string();
  j["outcome"] = std::string(1, u.classes().exact_p_at(r) ? 'P' : 'N');
  j["remoteness"] = u.exact().remoteness_at(r);
  j["reduced"] = red.to_string();
  j["moore"] = std::string(1, u.classes().moore_p_at(r) ? 'P' : 'N');
  j["remoteness_reduced"] = u.moore().remoteness_at(u.moore_rank_of_reduction(x));
  j["class"] = to_string(u.classes().pair_class_at(r));
  j["quality"] = to_string(u.classes().quality_at(r));
  j["regularity"] = reg ? nlohmann::ordered_json(to_string(*reg)) : nlohmann::ordered_json(nullptr);
  j["deadender"] = u.classes().deadender_at(r);
  j["moore_vector"] = mv.sums;
  j["balanced"] = balanced;
  j["xi"] = xi_v;
  j["best_move"] = move ? nlohmann::ordered_json(move->to_string()) : nlohmann::ordered_json(nullptr);
  if (json) {
    std::cout << j.dump() << '\n';
    return kOk;
  }
  std::cout << "position: " << x.to_string() << '\n'
            << "game: " << u.rule().name() << '\n'
            << "outcome: " << j["outcome"].get<std::string>() << '\n'
            << "remoteness: " << u.exact().remoteness_at(r) << '\n'
            << "reduced: " << red.to_string() << '\n'
            << "moore: " << j["moore"].get<std::string>() << " (" << u.moore().rule().name() << ")\n"
            << "remoteness reduced: " << j["remoteness_reduced"] << '\n'
            << "class: " << to_string(u.classes().pair_class_at(r)) << '\n'
            << "quality: " << to_string(u.classes().quality_at(r)) << '\n'
            << "regularity: " << (reg ? to_string(*reg) : "n/a") << '\n'
            << "deadender: " << (u.classes().deadender_at(r) ? "yes" : "no") << '\n'
            << "reduced column sums: ";
  for (std::size_t i = 0; i < mv.sums.size(); ++i) std::cout << (i ? "," : "") << mv.sums[i];
  std::cout << '\n'
            << "balanced: " << (balanced ? "yes" : "no") << '\n'
            << "xi_" << cfg.k + 1 << ": " << xi_v << '\n'
            << "best move: " << (move ? move->to_string() : "none (terminal)") << '\n';
  return kOk;
}

int cmd_verify(RunConfig& cfg, const std::string& which, bool json) {
  static const std::vector<std::string> kAll = {"bouton", "moore", "thm10", "lemma11",
                                                "obs5",   "obs67", "obs8",  "props"};
  if (which != "all" && std::find(kAll.begin(), kAll.end(), which) == kAll.end())
    throw UsageError("unknown check '" + which + "'");
  const Pile bound = checked_bound(cfg.bound);
  const bool five_two = cfg.n == 5 && cfg.k == 2;
  auto wants = [&](const std::string& c) { return which == "all" || which == c; };
  TableCache cache(cfg);
  std::vector<CheckReport> reports;

  if (wants("bouton")) reports.push_back(check_bouton(cache.get(GameRule::nim(3), bound, false)));
  if (wants("moore")) {
    reports.push_back(check_moore(cache.get(GameRule::moore(cfg.n - 1, cfg.k), bound, false)));
    reports.push_back(check_moore_winning_moves(cfg.n - 1, cfg.k, bound));
  }
  const bool need_universe = which != "bouton" && which != "moore";
  if (need_universe) {
    const Universe u = cache.universe(bound, false, true);
    if (wants("thm10") && five_two) reports.push_back(check_thm10(u.exact()));
    if (wants("lemma11")) reports.push_back(check_no_pp_moves(u));
    if (wants("obs5")) reports.push_back(check_obs5_column_permutation(u));
    if (wants("obs67")) reports.push_back(check_exceptional_observations(exceptional_graph(u), bound));
    if (wants("obs8")) reports.push_back(check_obs8_and_conjecture(u));
    if (wants("props") && five_two) reports.push_back(verify_propositions(u, which == "props"));
  }

  bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
  if (json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    std::cout << arr.dump() << '\n';
  } else {
    for (const auto& r : reports) print_report(r);
    std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_analyze(RunConfig& cfg, const std::string& which, const std::string& csv, std::optional<long> x1,
                std::optional<long> x2, const std::string& dot, const std::string& jsonl, bool include_isolated,
                bool json) {
  const Pile bound = checked_bound(cfg.bound);
  TableCache cache(cfg);
  const bool needs_rem = which == "remoteness" || !jsonl.empty();
  const bool needs_tax = which == "remoteness" || which == "exceptional";
  const Universe u = cache.universe(bound, needs_rem, needs_tax);
  std::vector<CheckReport> reports;

  if (which == "obs1" || which == "obs2" || which == "obs4") {
    const ClassCountSeries s = class_counts(u);
    if (!csv.empty()) export_csv_series(s, csv);
    if (which == "obs1") {
      CheckReport rep("obs1", bound);
      rep.scanned = u.size();
      const auto t = s.totals();
      rep.stats["pp"] = t[0];
      rep.stats["pn"] = t[1];
      rep.stats["np"] = t[2];
      rep.stats["nn"] = t[3];
      rep.stats["pn_share_of_p"] = s.pn_share_of_p();
      rep.stats["pn_share_of_all"] = s.pn_share_of_all();
      if (bound >= 85) {
        const bool within = std::abs(s.pn_share_of_p() - 0.20) <= 0.02;
        rep.stats["asserted"] = true;
        if (!within) {
          ++rep.violations;
          rep.notes.push_back("|PN|/(|PN|+|PP|) is outside 20% +/- 2 points");
        }
      } else {
        rep.stats["asserted"] = false;
        rep.notes.push_back("ratio reported only; asserted from bound 85");
      }
      reports.push_back(rep);
    } else {
      const auto series = which == "obs2" ? s.pp_pn_series() : s.mixed_series();
      reports.push_back(check_nonmonotonicity(series, which, bound));
    }
  } else if (which == "obs3") {
    CheckReport rep("obs3", bound);
    auto rows = nlohmann::ordered_json::array();
    const long lo = x1 ? *x1 : 0;
    const long hi = x1 ? *x1 : std::min<long>(15, bound);
    for (long v = lo; v <= hi; ++v) {
      const auto p = detect_periodicity(u, static_cast<Pile>(v),
                                        x2 ? std::optional<Pile>(static_cast<Pile>(*x2)) : std::nullopt);
      ++rep.scanned;
      nlohmann::ordered_json row;
      row["x1"] = v;
      if (x2) row["x2"] = *x2;
      row["length"] = p.length;
      row["found"] = p.period.found;
      if (p.period.found) {
        row["preperiod"] = p.period.preperiod;
        row["period"] = p.period.period;
        row["repetitions"] = p.period.repetitions;
      }
      rows.push_back(row);
    }
    rep.stats["periodicity"] = rows;
    reports.push_back(rep);
  } else if (which == "remoteness") {
    reports.push_back(remoteness_comparison(u).report);
  } else if (which == "exceptional") {
    const ExceptionalGraph g = exceptional_graph(u);
    CheckReport rep = check_exceptional_observations(g, bound);
    rep.stats["deadenders"] = deadenders(u).size();
    if (!dot.empty()) export_dot(g, include_isolated, dot);
    if (!jsonl.empty()) rep.stats["jsonl_records"] = export_jsonl(u, RecordFilter::exceptional, jsonl);
    reports.push_back(rep);
  } else {
    throw UsageError("unknown analysis '" + which + "' (obs1, obs2, obs3, obs4, remoteness, exceptional)");
  }

  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
  if (json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    std::cout << arr.dump() << '\n';
  } else {
    for (const auto& r : reports) {
      print_report(r);
      std::cout << r.stats.dump(2) << '\n';
    }
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_export(RunConfig& cfg, const std::string& filter, const std::string& out, bool lex) {
  const Pile bound = checked_bound(cfg.bound);
  if (out.empty()) throw UsageError("--out is required");
  const RecordFilter f = parse_record_filter(filter);
  TableCache cache(cfg);
  const Universe u = cache.universe(bound, true, true);
  const auto written = export_jsonl(u, f, out, lex);
  std::cout << written << " records -> " << out << '\n';
  return kOk;
}

// Reads "i j a b": take a stones from pile i and b from pile j (1-based, in
// the displayed order).
std::optional<Move> parse_human_move(const std::string& line, const Position& x, std::string& error) {
  std::istringstream in(line);
  std::vector<long> v;
  long t;
  while (in >> t) v.push_back(t);
  if (!in.eof() || v.empty() || v.size() % 2) {
    error = "expected pile numbers followed by amounts, e.g. \"1 2 3 1\"";
    return std::nullopt;
  }
  Move m;
  const std::size_t half = v.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const long pile = v[i], amount = v[half + i];
    if (pile < 1 || pile > static_cast<long>(x.size())) {
      error = "pile numbers run from 1 to " + std::to_string(x.size());
      return std::nullopt;
    }
    if (amount < 0 || amount > static_cast<long>(x[pile - 1])) {
      error = "pile " + std::to_string(pile) + " holds " + std::to_string(x[pile - 1]) + " stones";
      return std::nullopt;
    }
    m.changes.push_back({static_cast<unsigned>(pile - 1), static_cast<Pile>(x[pile - 1] - amount)});
  }
  return m;
}

int cmd_play(RunConfig& cfg, const std::string& game, const std::string& start, bool engine_first) {
  const Family f = parse_family(game);
  const GameRule rule = GameRule::make(f, cfg.n, f == Family::nim ? 1 : cfg.k);
  Position x = parse_position_arg(start, rule.n, cfg.quiet);
  TableCache cache(cfg);
  const SolveTable table = cache.get(rule, x.leader(), true);
  bool human = !engine_first;
  std::cout << "game " << rule.name() << "; enter moves as pile numbers then amounts, e.g. \"1 2 3 1\"\n";
  for (;;) {
    std::cout << "position " << x.to_string() << "  [" << to_char(table.outcome(x)) << ", remoteness "
              << table.remoteness(x) << "]\n";
    if (is_terminal(rule, x)) {
      std::cout << (human ? "you cannot move: engine wins\n" : "engine cannot move: you win\n");
      return kOk;
    }
    if (!human) {
      const Position y = best_move(table, x);
      std::cout << "engine plays " << x.to_string() << " -> " << y.to_string() << '\n';
      x = y;
      human = true;
      continue;
    }
    std::cout << "your move> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      std::cout << "\nsession ended\n";
      return kOk;
    }
    std::string error;
    auto move = parse_human_move(line, x, error);
    if (!move) {
      std::cout << "rejected: " << error << '\n';
      continue;
    }
    try {
      x = apply_move(rule, x, *move);
      human = false;
    } catch (const IllegalMoveError& e) {
      std::cout << "rejected: " << e.what() << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xnim: exact nim versus Moore's nim by retrograde analysis"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.cache_dir = default_cache_dir();
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache", cfg.cache_dir, "table cache directory (env XNIM_CACHE)");
  app.add_flag("--no-solve", cfg.no_solve, "fail instead of solving missing tables");
  app.add_flag("-q,--quiet", cfg.quiet, "suppress progress notes");

  auto add_shape = [&](CLI::App* sub, bool bound_required) {
    sub->add_option("--n", cfg.n, "pile count of the exact game")->check(CLI::Range(2, 8));
    auto* k = sub->add_option("--k", cfg.k, "move arity")->check(CLI::Range(1, 8));
    auto* b = sub->add_option("--bound", cfg.bound, "largest pile value")->check(CLI::Range(0, 65535));
    if (bound_required) b->required();
    return k;
  };

  std::string game, out;
  bool no_remoteness = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve and cache tables");
  auto* k_opt = add_shape(solve_cmd, true);
  solve_cmd->add_option("--game", game, "nim, moore or exact (default: exact and its moore reduction)");
  solve_cmd->add_option("--out", out, "write the table here");
  solve_cmd->add_flag("--no-remoteness", no_remoteness, "outcomes only");

  std::string position_text;
  bool json = false;
  auto* query_cmd = app.add_subcommand("query", "report everything known about one position");
  add_shape(query_cmd, false);
  query_cmd->add_option("position", position_text, "comma-separated piles")->required();
  query_cmd->add_flag("--json", json, "machine-readable output");

  std::string which = "all";
  auto* verify_cmd = app.add_subcommand("verify", "run checks; exit 0 iff all pass");
  add_shape(verify_cmd, true);
  verify_cmd->add_option("which", which, "all|bouton|moore|thm10|lemma11|obs5|obs67|obs8|props");
  verify_cmd->add_flag("--json", json, "JSON report on stdout");

  std::string analysis, csv, dot, jsonl;
  std::optional<long> x1, x2;
  bool include_isolated = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "emit series, periodicity and graph data");
  add_shape(analyze_cmd, true);
  analyze_cmd->add_option("which", analysis, "obs1|obs2|obs3|obs4|remoteness|exceptional")->required();
  analyze_cmd->add_option("--csv", csv, "class-count series CSV (obs1, obs2, obs4)");
  analyze_cmd->add_option("--x1", x1, "first pile for obs3 (default 0..15)");
  analyze_cmd->add_option("--x2", x2, "also hold the second pile fixed (obs3)");
  analyze_cmd->add_option("--dot", dot, "exceptional graph DOT file");
  analyze_cmd->add_option("--jsonl", jsonl, "exceptional positions JSONL file");
  analyze_cmd->add_flag("--include-isolated", include_isolated, "keep isolated nodes in the DOT output");
  analyze_cmd->add_flag("--json", json, "JSON report on stdout");

  std::string filter = "all";
  bool lex = false;
  auto* export_cmd = app.add_subcommand("export", "write position records as JSONL");
  add_shape(export_cmd, true);
  export_cmd->add_option("--filter", filter, "all|exceptional|exact-p|star-p|deadender");
  export_cmd->add_option("--out", out, "output path")->required();
  export_cmd->add_flag("--lex", lex, "sort records lexicographically instead of by rank");

  std::string play_game = "exact", start = "3,4,5,6,7";
  bool engine_first = false;
  auto* play_cmd = app.add_subcommand("play", "play against the solver");
  add_shape(play_cmd, false);
  play_cmd->add_option("--game", play_game, "nim, moore or exact");
  play_cmd->add_option("--start", start, "starting position");
  play_cmd->add_flag("--engine-first", engine_first, "let the engine move first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (cfg.k > cfg.n) throw UsageError("--k must not exceed --n");
    if (*solve_cmd) return cmd_solve(cfg, game, out, no_remoteness, k_opt->count() > 0);
    if (*query_cmd) return cmd_query(cfg, position_text, json);
    if (*verify_cmd) return cmd_verify(cfg, which, json);
    if (*analyze_cmd) return cmd_analyze(cfg, analysis, csv, x1, x2, dot, jsonl, include_isolated, json);
    if (*export_cmd) return cmd_export(cfg, filter, out, lex);
    if (*play_cmd) return cmd_play(cfg, play_game, start, engine_first);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const BoundError& e) {
    std::cerr << "out of bound: " << e.what() << '\n';
    return kOutOfBound;
  } catch (const InsufficientBoundError& e) {
    std::cerr << e.what() << '\n';
    return kInsufficientBound;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  }
  return kUsage;
}
