#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "urysohn/cauchy.hpp"
#include "urysohn/lipschitz.hpp"
#include "urysohn/oracle.hpp"
#include "urysohn/structure_k.hpp"
#include "urysohn/suitable.hpp"

namespace urysohn {

struct OracleFile {
  std::optional<CompactPresentation> compact;
  std::optional<PolishPresentation> polish;
  std::optional<Rat> L;
  std::vector<GrowthRecord> log;
  friend bool operator==(const OracleFile&, const OracleFile&) = default;
};

using Document =
    std::variant<StructureK, BarStructureK, StructureC, StructureL, CompactPresentation, PolishPresentation, OracleFile>;

inline const char* document_kind(const Document& d) {
  static const char* names[] = {"K", "BARK", "C", "L", "COMPACT", "POLISH", "ORACLE"};
  return names[d.index()];
}

namespace io_detail {

struct Token {
  std::string text;
  std::size_t col;
};

struct Line {
  std::size_t no;
  std::vector<Token> tok;
  [[noreturn]] void fail(const std::string& msg, std::size_t i = 0) const {
    throw ParseError(msg, no, i < tok.size() ? tok[i].col : 1);
  }
  const std::string& at(std::size_t i) const {
    if (i >= tok.size()) fail("missing field after '" + tok.back().text + "'", tok.size() - 1);
    return tok[i].text;
  }
  void arity(std::size_t n) const {
    if (tok.size() != n) fail("'" + tok[0].text + "' takes " + std::to_string(n - 1) + " fields", std::min(n, tok.size() - 1));
  }
};

inline std::vector<Line> lex(std::string_view text) {
  std::vector<Line> out;
  std::size_t no = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++no;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    Line line{no, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r') {
        ++i;
        continue;
      }
      auto j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      line.tok.push_back({std::string(raw.substr(i, j - i)), i + 1});
      i = j;
    }
    if (!line.tok.empty()) out.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

inline Rat rat(const Line& l, std::size_t i) {
  try {
    return Rat::parse(l.at(i), true);
  } catch (const ParseError& e) {
    l.fail(e.what(), i);
  }
}

inline std::size_t natural(const Line& l, std::size_t i, std::size_t min = 0) {
  const auto& s = l.at(i);
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos)
    l.fail("expected a natural number, got '" + s + "'", i);
  auto v = std::stoul(s);
  if (v < min) l.fail("value must be at least " + std::to_string(min), i);
  return v;
}

// point and d records shared by every metric-carrying format.
struct MetricReader {
  FinMetric m;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  bool read(const Line& l) {
    const auto& kw = l.tok[0].text;
    if (kw == "point") {
      l.arity(2);
      const auto& id = l.at(1);
      if (id.find('=') != std::string::npos || id.find(',') != std::string::npos) l.fail("invalid point id", 1);
      if (m.index_of(id)) l.fail("duplicate point '" + id + "'", 1);
      m.add_point(id);
      return true;
    }
    if (kw == "d") {
      l.arity(4);
      auto a = point(l, 1), b = point(l, 2);
      if (a == b) l.fail("distance of a point to itself", 2);
      if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
        l.fail("duplicate record d " + l.at(1) + " " + l.at(2), 0);
      m.set(a, b, rat(l, 3));
      return true;
    }
    return false;
  }
  std::size_t point(const Line& l, std::size_t i) const {
    auto idx = m.index_of(l.at(i));
    if (!idx) l.fail("unknown point '" + l.at(i) + "'", i);
    return *idx;
  }
};

// "p <n> <m> <id...> <value>" collected until the point count is final.
struct PredRecord {
  PredKey key;
  Tuple t;
  Rat v;
  std::size_t line;
};

inline PredRecord read_pred(const Line& l, const MetricReader& mr) {
  auto n = static_cast<unsigned>(natural(l, 1, 1));
  auto m = static_cast<unsigned>(natural(l, 2, 1));
  l.arity(n + 4);
  Tuple t;
  for (unsigned c = 0; c < n; ++c) t.push_back(mr.point(l, 3 + c));
  return {{n, m}, t, rat(l, 3 + n), l.no};
}

inline std::map<PredKey, PredTable> build_tables(const std::vector<PredRecord>& recs, std::size_t points) {
  std::map<PredKey, PredTable> out;
  for (const auto& r : recs) {
    auto& table = out[r.key];
    table.resize(tuple_count(points, r.key.n));
    auto& cell = table[encode_tuple(r.t, points)];
    if (cell) throw ParseError("duplicate record for " + pred_name(r.key), r.line, 1);
    cell = r.v;
  }
  return out;
}

inline SuitableFn read_suit(const Line& l, std::size_t first) {
  SuitableFn f;
  for (std::size_t i = first; i < l.tok.size(); ++i) {
    std::string_view item = l.tok[i].text;
    // items may also be comma separated inside one token
    std::size_t start = 0;
    while (start <= item.size()) {
      auto comma = item.find(',', start);
      auto part = item.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (!part.empty()) {
        auto eq = part.find('=');
        if (eq == std::string_view::npos) l.fail("expected <index>=<value>", i);
        Line sub{l.no, {{std::string(part.substr(0, eq)), l.tok[i].col}, {std::string(part.substr(eq + 1)), l.tok[i].col}}};
        auto idx = natural(sub, 0, 1) - 1;
        if (f.r.count(idx)) l.fail("duplicate support index " + std::to_string(idx + 1), i);
        f.r[idx] = rat(sub, 1);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return f;
}

inline std::string suit_str(const SuitableFn& f) {
  std::string s;
  for (const auto& [i, r] : f.r) s += (s.empty() ? "" : ",") + std::to_string(i + 1) + "=" + r.str();
  return s;
}

inline void write_metric(std::ostringstream& out, const FinMetric& m) {
  for (std::size_t i = 0; i < m.size(); ++i) out << "point " << m.id(i) << "\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (auto v = m.entry(i, j)) out << "d " << m.id(i) << " " << m.id(j) << " " << v->str() << "\n";
}

inline void write_preds(std::ostringstream& out, const FinMetric& m, const std::map<PredKey, PredTable>& preds) {
  for (const auto& [k, table] : preds)
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) continue;
      out << "p " << k.n << " " << k.m;
      for (auto x : decode_tuple(i, m.size(), k.n)) out << " " << m.id(x);
      out << " " << table[i]->str() << "\n";
    }
}

inline FinMetric dense_table(const std::vector<Line>& lines, std::size_t count, const std::string& kw,
                             std::size_t count_line) {
  FinMetric m;
  for (std::size_t i = 0; i < count; ++i) m.add_point(std::to_string(i + 1));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& l : lines) {
    if (l.tok[0].text != kw) continue;
    l.arity(4);
    auto a = natural(l, 1, 1) - 1, b = natural(l, 2, 1) - 1;
    if (a >= count || b >= count) l.fail("dense index out of range", a >= count ? 1 : 2);
    if (a == b) l.fail("distance of a point to itself", 2);
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) l.fail("duplicate record " + kw, 0);
    m.set(a, b, rat(l, 3));
  }
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (!m.has(i, j))
        throw ParseError("missing " + kw + " " + std::to_string(i + 1) + " " + std::to_string(j + 1), count_line, 1);
  return m;
}

inline Document parse_oracle(const std::vector<Line>& lines) {
  OracleFile f;
  std::optional<std::size_t> kcount, zcount;
  std::size_t kline = 0, zline = 0;
  FinMetric ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const auto& kw = l.tok[0].text;
    if (kw == "kpoints" || kw == "zpoints") {
      l.arity(2);
      auto& c = kw == "kpoints" ? kcount : zcount;
      if (c) l.fail("duplicate record " + kw);
      if (!f.log.empty()) l.fail(kw + " must precede the growth records");
      c = natural(l, 1);
      (kw == "kpoints" ? kline : zline) = l.no;
    } else if (kw == "kd" || kw == "zd") {
      if (!f.log.empty()) l.fail(kw + " must precede the growth records");
    } else if (kw == "L") {
      l.arity(2);
      if (f.L) l.fail("duplicate record L");
      f.L = rat(l, 1);
    } else if (kw == "grow") {
      if (l.tok.size() < 3) l.fail("grow takes an id and 'gap <value>' or 'eta <id>=<value>...'");
      GrowthRecord rec;
      rec.id = l.at(1);
      if (l.at(2) == "gap") {
        l.arity(4);
        rec.gap = rat(l, 3);
      } else if (l.at(2) == "eta") {
        if (l.tok.size() < 4) l.fail("eta needs at least one base distance", 2);
        for (std::size_t t = 3; t < l.tok.size(); ++t) {
          const auto& s = l.tok[t].text;
          auto eq = s.find('=');
          if (eq == std::string::npos) l.fail("expected <id>=<value>", t);
          auto idx = ids.index_of(s.substr(0, eq));
          if (!idx) l.fail("unknown point '" + s.substr(0, eq) + "'", t);
          Line sub{l.no, {{s.substr(eq + 1), l.tok[t].col}}};
          rec.eta.emplace_back(*idx, rat(sub, 0));
        }
      } else {
        l.fail("expected 'gap' or 'eta'", 2);
      }
      if (ids.index_of(rec.id)) l.fail("duplicate point '" + rec.id + "'", 1);
      ids.add_point(rec.id);
      f.log.push_back(std::move(rec));
    } else if (kw == "seed") {
      l.arity(1);
      GrowthRecord rec;
      rec.kind = GrowthRecord::Kind::Seed;
      f.log.push_back(std::move(rec));
    } else if (kw == "newpred" || kw == "pred" || kw == "suit" || kw == "pz") {
      if (f.log.empty()) l.fail("'" + kw + "' outside a growth record");
      auto& rec = f.log.back();
      if (kw == "newpred") {
        l.arity(3);
        rec.fresh.push_back({static_cast<unsigned>(natural(l, 1, 1)), static_cast<unsigned>(natural(l, 2, 1))});
      } else if (kw == "pred") {
        auto n = static_cast<unsigned>(natural(l, 1, 1));
        auto g = static_cast<unsigned>(natural(l, 2, 1));
        l.arity(n + 4);
        Tuple t;
        for (unsigned c = 0; c < n; ++c) {
          auto idx = ids.index_of(l.at(3 + c));
          if (!idx) l.fail("unknown point '" + l.at(3 + c) + "'", 3 + c);
          t.push_back(*idx);
        }
        rec.entries.emplace_back(GlobalPred{n, g}, std::move(t), rat(l, 3 + n));
      } else if (kw == "suit") {
        if (rec.suit) l.fail("duplicate record suit");
        rec.suit = read_suit(l, 1);
      } else {
        l.arity(2);
        if (rec.dense) l.fail("duplicate record pz");
        rec.dense = natural(l, 1, 1) - 1;
      }
    } else {
      l.fail("unknown record '" + kw + "'");
    }
  }
  if (kcount) f.compact = CompactPresentation{dense_table(lines, *kcount, "kd", kline)};
  if (zcount) {
    f.polish = PolishPresentation{dense_table(lines, *zcount, "zd", zline)};
    if (!f.L) throw ParseError("Lipschitz oracle needs an L record", zline, 1);
  } else if (f.L) {
    throw ParseError("L record without zpoints");
  }
  if (!kcount)
    for (const auto& l : lines)
      if (l.tok[0].text == "kd") l.fail("kd without kpoints");
  if (!zcount)
    for (const auto& l : lines)
      if (l.tok[0].text == "zd") l.fail("zd without zpoints");
  return f;
}

}  // namespace io_detail

inline Document parse_structure_file(std::string_view text) {
  using namespace io_detail;
  auto lines = lex(text);
  if (lines.empty()) throw ParseError("empty file: expected a header", 1, 1);
  const auto& head = lines.front();
  head.arity(1);
  const auto& kind = head.tok[0].text;
  if (kind == "ORACLE") return parse_oracle(lines);

  MetricReader mr;
  std::optional<unsigned> nA;
  std::optional<FixedArityConfig> fixed;
  std::map<unsigned, std::vector<unsigned>> index_sets;
  std::vector<PredRecord> preds;
  std::map<std::size_t, SuitableFn> suits;
  std::map<std::size_t, std::size_t> pz;
  std::optional<Rat> L;
  const bool k_like = kind == "K" || kind == "BARK";
  if (!k_like && kind != "C" && kind != "L" && kind != "COMPACT" && kind != "POLISH")
    head.fail("unknown header '" + kind + "'");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const auto& kw = l.tok[0].text;
    if (mr.read(l)) continue;
    if (k_like && kw == "nA") {
      l.arity(2);
      if (nA) l.fail("duplicate record nA");
      nA = static_cast<unsigned>(natural(l, 1));
    } else if (kind == "K" && kw == "fixed") {
      if (fixed) l.fail("duplicate record fixed");
      fixed = FixedArityConfig{};
      for (std::size_t t = 1; t < l.tok.size(); ++t) fixed->arities.push_back(static_cast<unsigned>(natural(l, t, 1)));
    } else if (kind == "BARK" && kw == "index") {
      auto n = static_cast<unsigned>(natural(l, 1, 1));
      if (index_sets.count(n)) l.fail("duplicate record index " + std::to_string(n));
      auto& set = index_sets[n];
      for (std::size_t t = 2; t < l.tok.size(); ++t) set.push_back(static_cast<unsigned>(natural(l, t, 1)));
    } else if (k_like && kw == "p") {
      preds.push_back(read_pred(l, mr));
    } else if (kind == "C" && kw == "suit") {
      if (l.tok.size() < 2) l.fail("suit needs a point id");
      auto a = mr.point(l, 1);
      if (suits.count(a)) l.fail("duplicate record suit " + l.at(1));
      suits[a] = read_suit(l, 2);
    } else if (kind == "L" && kw == "pz") {
      l.arity(3);
      auto a = mr.point(l, 1);
      if (pz.count(a)) l.fail("duplicate record pz " + l.at(1));
      pz[a] = natural(l, 2, 1) - 1;
    } else if (kind == "L" && kw == "L") {
      l.arity(2);
      if (L) l.fail("duplicate record L");
      L = rat(l, 1);
    } else {
      l.fail("unknown record '" + kw + "' in a " + kind + " file");
    }
  }

  const auto n = mr.m.size();
  if (kind == "COMPACT" || kind == "POLISH") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!mr.m.has(i, j)) throw ParseError("missing d " + mr.m.id(i) + " " + mr.m.id(j));
    if (kind == "COMPACT") return CompactPresentation{mr.m};
    return PolishPresentation{mr.m};
  }
  if (kind == "C") {
    StructureC s;
    s.metric = mr.m;
    s.p.resize(n);
    for (auto& [a, f] : suits) s.p[a] = std::move(f);
    return s;
  }
  if (kind == "L") {
    StructureL s;
    s.metric = mr.m;
    if (!L) throw ParseError("L file needs an L record");
    s.L = *L;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pz.count(i)) throw ParseError("point '" + mr.m.id(i) + "' has no pz record");
      s.p.push_back(pz[i]);
    }
    return s;
  }
  auto tables = build_tables(preds, n);
  if (kind == "K") {
    StructureK s;
    s.metric = mr.m;
    s.nA = nA ? *nA : static_cast<unsigned>(n);
    s.fixed = fixed;
    s.pred = std::move(tables);
    return s;
  }
  BarStructureK s;
  s.metric = mr.m;
  s.nA = nA ? *nA : static_cast<unsigned>(n);
  s.index_sets = std::move(index_sets);
  s.pred = std::move(tables);
  return s;
}

inline std::string serialize(const StructureK& s) {
  std::ostringstream out;
  out << "K\n";
  out << "nA " << s.nA << "\n";
  if (s.fixed) {
    out << "fixed";
    for (auto a : s.fixed->arities) out << " " << a;
    out << "\n";
  }
  io_detail::write_metric(out, s.metric);
  io_detail::write_preds(out, s.metric, s.pred);
  return out.str();
}

inline std::string serialize(const BarStructureK& s) {
  std::ostringstream out;
  out << "BARK\n";
  out << "nA " << s.nA << "\n";
  for (const auto& [n, set] : s.index_sets) {
    out << "index " << n;
    for (auto m : set) out << " " << m;
    out << "\n";
  }
  io_detail::write_metric(out, s.metric);
  io_detail::write_preds(out, s.metric, s.pred);
  return out.str();
}

inline std::string serialize(const StructureC& s) {
  std::ostringstream out;
  out << "C\n";
  io_detail::write_metric(out, s.metric);
  for (std::size_t a = 0; a < s.p.size(); ++a)
    if (!s.p[a].r.empty()) out << "suit " << s.metric.id(a) << " " << io_detail::suit_str(s.p[a]) << "\n";
  return out.str();
}

inline std::string serialize(const StructureL& s) {
  std::ostringstream out;
  out << "L\n";
  out << "L " << s.L.str() << "\n";
  io_detail::write_metric(out, s.metric);
  for (std::size_t a = 0; a < s.p.size(); ++a) out << "pz " << s.metric.id(a) << " " << s.p[a] + 1 << "\n";
  return out.str();
}

inline std::string serialize(const CompactPresentation& k) {
  std::ostringstream out;
  out << "COMPACT\n";
  io_detail::write_metric(out, k.k);
  return out.str();
}

inline std::string serialize(const PolishPresentation& z) {
  std::ostringstream out;
  out << "POLISH\n";
  io_detail::write_metric(out, z.z);
  return out.str();
}

inline std::string serialize(const OracleFile& f) {
  std::ostringstream out;
  out << "ORACLE\n";
  auto dense = [&](const FinMetric& m, const char* count, const char* kw) {
    out << count << " " << m.size() << "\n";
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) out << kw << " " << i + 1 << " " << j + 1 << " " << m(i, j).str() << "\n";
  };
  if (f.compact) dense(f.compact->k, "kpoints", "kd");
  if (f.polish) dense(f.polish->z, "zpoints", "zd");
  if (f.L) out << "L " << f.L->str() << "\n";
  std::vector<std::string> ids;
  auto id = [&](std::size_t i) -> const std::string& {
    if (i >= ids.size()) throw PreconditionError("log refers to a point before its growth");
    return ids[i];
  };
  for (const auto& rec : f.log) {
    if (rec.kind == GrowthRecord::Kind::Seed) {
      out << "seed\n";
    } else {
      ids.push_back(rec.id);
      if (rec.eta.empty()) {
        out << "grow " << rec.id << " gap " << rec.gap.str() << "\n";
      } else {
        out << "grow " << rec.id << " eta";
        for (const auto& [b, e] : rec.eta) out << " " << id(b) << "=" << e.str();
        out << "\n";
      }
    }
    for (auto gp : rec.fresh) out << "newpred " << gp.n << " " << gp.g << "\n";
    for (const auto& [gp, t, v] : rec.entries) {
      out << "pred " << gp.n << " " << gp.g;
      for (auto x : t) out << " " << id(x);
      out << " " << v.str() << "\n";
    }
    if (rec.suit) out << (rec.suit->r.empty() ? "suit" : "suit " + io_detail::suit_str(*rec.suit)) << "\n";
    if (rec.dense) out << "pz " << *rec.dense + 1 << "\n";
  }
  return out.str();
}

inline std::string serialize(const Document& d) {
  return std::visit([](const auto& x) { return serialize(x); }, d);
}

inline OracleFile oracle_file(const LimitOracle& o) {
  return {o.compact(), o.polish(), o.lipschitz(), o.log()};
}

inline LimitOracle load_oracle(const OracleFile& f) {
  try {
    return replay(f.log, f.compact, f.polish, f.L);
  } catch (const GrowthError& e) {
    throw ParseError(std::string("oracle log does not replay: ") + e.what());
  }
}

}  // namespace urysohn
