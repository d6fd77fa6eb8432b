#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "xnim/analysis.hpp"
#include "xnim/classify.hpp"
#include "xnim/error.hpp"
#include "xnim/solver.hpp"

namespace xnim {

// Table file layout (all integers little-endian):
//   0  magic "XNIMTBL1"       8 bytes
//   8  format version         1 byte
//   9  family code            1 byte (0 nim, 1 moore, 2 exact)
//  10  n                      1 byte
//  11  k                      1 byte
//  12  flags                  1 byte (bit 0: remoteness present)
//  13  bound                  4 bytes
//  17  position count         8 bytes
//  25  outcome bitmap         ceil(count / 8) bytes, rank r at byte r/8 bit r%8, P = 1
//      remoteness             count x 2 bytes, if flagged
inline constexpr std::array<char, 8> kTableMagic{'X', 'N', 'I', 'M', 'T', 'B', 'L', '1'};
inline constexpr std::uint8_t kTableVersion = 1;
inline constexpr std::size_t kTableHeaderSize = 25;

namespace detail {

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_le(const std::string& in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace detail

inline std::string encode_table(const SolveTable& t) {
  std::string out;
  const std::uint64_t count = t.size();
  out.reserve(kTableHeaderSize + t.outcome_bytes().size() + (t.has_remoteness() ? 2 * count : 0));
  out.append(kTableMagic.begin(), kTableMagic.end());
  out.push_back(static_cast<char>(kTableVersion));
  out.push_back(static_cast<char>(t.rule().family));
  out.push_back(static_cast<char>(t.rule().n));
  out.push_back(static_cast<char>(t.rule().k));
  out.push_back(static_cast<char>(t.has_remoteness() ? 1 : 0));
  detail::put_le(out, t.bound(), 4);
  detail::put_le(out, count, 8);
  out.append(reinterpret_cast<const char*>(t.outcome_bytes().data()), t.outcome_bytes().size());
  if (t.has_remoteness())
    for (std::uint16_t r : t.remoteness_values()) detail::put_le(out, r, 2);
  return out;
}

inline SolveTable decode_table(const std::string& in) {
  if (in.size() < kTableHeaderSize) throw CorruptionError("table file shorter than its header");
  if (!std::equal(kTableMagic.begin(), kTableMagic.end(), in.begin())) throw CorruptionError("bad table magic");
  const auto version = static_cast<std::uint8_t>(in[8]);
  if (version > kTableVersion)
    throw UnsupportedVersionError("table format version " + std::to_string(version) + " is newer than supported " +
                                  std::to_string(kTableVersion));
  if (version == 0) throw CorruptionError("table format version 0 is invalid");
  const auto family = static_cast<std::uint8_t>(in[9]);
  const auto n = static_cast<std::uint8_t>(in[10]);
  const auto k = static_cast<std::uint8_t>(in[11]);
  const auto flags = static_cast<std::uint8_t>(in[12]);
  if (family > 2) throw CorruptionError("unknown game family code " + std::to_string(family));
  if (flags & ~1u) throw CorruptionError("unknown table flags");
  GameRule rule;
  try {
    rule = GameRule::make(static_cast<Family>(family), n, k);
  } catch (const std::invalid_argument& e) {
    throw CorruptionError(std::string("invalid rule in table header: ") + e.what());
  }
  const std::uint64_t bound = detail::get_le(in, 13, 4);
  const std::uint64_t count = detail::get_le(in, 17, 8);
  if (bound > kMaxBound) throw CorruptionError("table bound out of range");
  // Validate sizes before allocating anything proportional to the bound.
  if (count != RankedIndex(rule.n, static_cast<Pile>(bound)).total())
    throw CorruptionError("position count does not match bound");
  const bool has_rem = flags & 1u;
  const std::uint64_t bitmap = (count + 7) / 8;
  const std::uint64_t expected = kTableHeaderSize + bitmap + (has_rem ? 2 * count : 0);
  if (in.size() != expected)
    throw CorruptionError("table file is " + std::to_string(in.size()) + " bytes, header implies " +
                          std::to_string(expected));
  SolveTable t(rule, static_cast<Pile>(bound));
  std::copy(in.begin() + kTableHeaderSize, in.begin() + static_cast<std::ptrdiff_t>(kTableHeaderSize + bitmap),
            reinterpret_cast<char*>(t.outcome_bytes().data()));
  if (count % 8 && (t.outcome_bytes().back() >> (count % 8)))
    throw CorruptionError("padding bits of the outcome bitmap are set");
  if (has_rem) {
    auto& rem = t.remoteness_values();
    rem.resize(count);
    for (std::uint64_t r = 0; r < count; ++r)
      rem[r] = static_cast<std::uint16_t>(detail::get_le(in, kTableHeaderSize + bitmap + 2 * r, 2));
  }
  return t;
}

inline void write_table(const SolveTable& t, const std::string& path) { detail::write_file(path, encode_table(t)); }
inline SolveTable read_table(const std::string& path) { return decode_table(detail::read_file(path)); }

// ---------------------------------------------------------------------------
// JSONL position records

enum class RecordFilter { all, exceptional, exact_p, star_p, deadender };

inline RecordFilter parse_record_filter(const std::string& s) {
  if (s == "all") return RecordFilter::all;
  if (s == "exceptional") return RecordFilter::exceptional;
  if (s == "p" || s == "exact-p") return RecordFilter::exact_p;
  if (s == "star-p") return RecordFilter::star_p;
  if (s == "deadender") return RecordFilter::deadender;
  throw std::invalid_argument("unknown filter '" + s + "' (all, exceptional, exact-p, star-p, deadender)");
}

// One JSON object per line; field order is fixed.
inline std::string position_record(const Universe& u, std::uint64_t r, const Position& x) {
  const ClassTable& c = u.classes();
  std::string line = "{\"pos\":[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) line += ',';
    line += std::to_string(x[i]);
  }
  line += "],\"outcome\":\"";
  line += c.exact_p_at(r) ? 'P' : 'N';
  line += "\",\"moore\":\"";
  line += c.moore_p_at(r) ? 'P' : 'N';
  line += "\",\"class\":\"";
  line += to_string(c.pair_class_at(r));
  line += "\",\"quality\":";
  if (u.has_taxonomy()) {
    line += '"';
    line += to_string(c.quality_at(r));
    line += '"';
  } else {
    line += "null";
  }
  line += ",\"regularity\":";
  const auto reg = u.has_taxonomy() ? c.regularity_at(r) : std::nullopt;
  if (reg) {
    line += '"';
    line += to_string(*reg);
    line += '"';
  } else {
    line += "null";
  }
  line += ",\"remoteness\":";
  line += u.exact().has_remoteness() ? std::to_string(u.exact().remoteness_at(r)) : "null";
  line += ",\"remoteness_reduced\":";
  line += u.moore().has_remoteness() ? std::to_string(u.moore().remoteness_at(u.moore_rank_of_reduction(x)))
                                     : "null";
  line += "}\n";
  return line;
}

inline bool record_selected(const Universe& u, std::uint64_t r, RecordFilter filter) {
  const ClassTable& c = u.classes();
  switch (filter) {
    case RecordFilter::all: return true;
    case RecordFilter::exceptional: return u.has_taxonomy() && c.exceptional_at(r);
    case RecordFilter::exact_p: return c.exact_p_at(r);
    case RecordFilter::star_p: return c.moore_p_at(r);
    case RecordFilter::deadender: return u.has_taxonomy() && c.deadender_at(r);
  }
  return false;
}

// Rank order by default; `lexicographic` re-sorts by pile tuple.
inline std::uint64_t export_jsonl(const Universe& u, RecordFilter filter, std::ostream& out,
                                  bool lexicographic = false) {
  if ((filter == RecordFilter::exceptional || filter == RecordFilter::deadender) && !u.has_taxonomy())
    throw std::logic_error("filter needs the taxonomy pass");
  std::uint64_t written = 0;
  std::vector<std::pair<Position, std::uint64_t>> picked;
  for_each_ranked(u.exact().index(), 0, u.bound(), [&](std::uint64_t r, const Position& x) {
    if (!record_selected(u, r, filter)) return;
    if (lexicographic) {
      picked.emplace_back(x, r);
      return;
    }
    out << position_record(u, r, x);
    ++written;
  });
  if (lexicographic) {
    std::sort(picked.begin(), picked.end());
    for (const auto& [x, r] : picked) out << position_record(u, r, x);
    written = picked.size();
  }
  if (!out) throw Error("JSONL write failed");
  return written;
}

inline std::uint64_t export_jsonl(const Universe& u, RecordFilter filter, const std::string& path,
                                  bool lexicographic = false) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return export_jsonl(u, filter, out, lexicographic);
}

// ---------------------------------------------------------------------------
// CSV ratio series

inline std::string format_ratio(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void export_csv_series(const ClassCountSeries& s, std::ostream& out) {
  out << "stones,pp,pn,np,nn,ratio_pp_pn,ratio_mixed\n";
  for (std::size_t stones = 0; stones < s.rows.size(); ++stones) {
    const auto& r = s.rows[stones];
    out << stones << ',' << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ','
        << format_ratio(s.ratio_pp_pn(stones)) << ',' << format_ratio(s.ratio_mixed(stones)) << '\n';
  }
  if (!out) throw Error("CSV write failed");
}

inline void export_csv_series(const ClassCountSeries& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  export_csv_series(s, out);
}

// ---------------------------------------------------------------------------
// DOT export of the exceptional graph

inline std::string dot_id(const Position& x) { return '"' + x.to_string('-') + '"'; }

inline void export_dot(const ExceptionalGraph& g, bool include_isolated, std::ostream& out) {
  std::size_t shown = 0;
  for (const auto& v : g.nodes) shown += include_isolated || !v.isolated();
  out << "// exceptional graph: " << g.nodes.size() << " nodes (" << g.isolated_count() << " isolated), "
      << g.edges.size() << " edges; isolated nodes " << (include_isolated ? "included" : "omitted") << '\n';
  if (shown == 0) {
    out << "digraph exceptional {}\n";
    return;
  }
  out << "digraph exceptional {\n";
  for (const auto& v : g.nodes) {
    if (!include_isolated && v.isolated()) continue;
    out << "  " << dot_id(v.pos) << " [outcome=\"" << (v.exact_p ? 'P' : 'N') << "\", class=\""
        << to_string(v.pair_class) << "\", shape=" << (v.exact_p ? "box" : "ellipse")
        << (v.isolated() ? ", isolated=true" : "") << "];\n";
  }
  for (const auto& [a, b] : g.edges) out << "  " << dot_id(g.nodes[a].pos) << " -> " << dot_id(g.nodes[b].pos) << ";\n";
  out << "}\n";
  if (!out) throw Error("DOT write failed");
}

inline void export_dot(const ExceptionalGraph& g, bool include_isolated, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  export_dot(g, include_isolated, out);
}

}  // namespace xnim
