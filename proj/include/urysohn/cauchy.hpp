#pragma once

#include <map>
#include <string>
#include <vector>

#include "urysohn/certificate.hpp"
#include "urysohn/oracle.hpp"
#include "urysohn/structure_k.hpp"

namespace urysohn {

// Finite structure whose predicates carry arbitrary index sets I_n with
// |I_n| = nA - n + 1.
struct BarStructureK {
  FinMetric metric;
  unsigned nA = 0;
  std::map<unsigned, std::vector<unsigned>> index_sets;
  std::map<PredKey, PredTable> pred;

  std::size_t size() const { return metric.size(); }
  std::vector<PredKey> slots() const {
    std::vector<PredKey> out;
    for (const auto& [n, set] : index_sets)
      for (auto m : set) out.push_back({n, m});
    return out;
  }
  const Rat& value(PredKey k, const Tuple& t) const {
    const auto& v = pred.at(k).at(encode_tuple(t, size()));
    if (!v) throw StructuralError(pred_name(k) + " undefined at " + tuple_str(metric, t));
    return *v;
  }
  // Index sets 1..nA+1-n, as for a plain structure.
  static BarStructureK from_k(const StructureK& s) {
    BarStructureK b;
    b.metric = s.metric;
    b.nA = s.nA;
    for (unsigned n = 1; n <= s.nA; ++n)
      for (unsigned m = 1; m <= s.nA + 1 - n; ++m) b.index_sets[n].push_back(m);
    b.pred = s.pred;
    return b;
  }
  friend bool operator==(const BarStructureK&, const BarStructureK&) = default;
};

inline std::vector<KViolation> validate_bar(const BarStructureK& s) {
  using K = KViolation::Kind;
  std::vector<KViolation> out;
  try {
    for (const auto& v : validate_metric(s.metric)) out.push_back({K::Metric, v.message});
  } catch (const StructuralError& e) {
    out.push_back({K::Totality, e.what()});
    return out;
  }
  if (s.size() > 0 && (s.nA == 0 || s.nA > s.size())) out.push_back({K::ArityBound, "nA outside 1..|A|"});
  if (s.size() == 0 && s.nA != 0) out.push_back({K::ArityBound, "empty structure must have nA = 0"});
  for (unsigned n = 1; n <= s.nA; ++n) {
    auto it = s.index_sets.find(n);
    std::size_t have = it == s.index_sets.end() ? 0 : it->second.size();
    if (have != s.nA + 1 - n)
      out.push_back({K::Pattern, "I_" + std::to_string(n) + " must have " + std::to_string(s.nA + 1 - n) + " indices"});
    if (it != s.index_sets.end()) {
      auto sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || (!sorted.empty() && sorted.front() == 0))
        out.push_back({K::Pattern, "I_" + std::to_string(n) + " must list distinct positive indices"});
    }
  }
  for (const auto& [n, set] : s.index_sets)
    if (n == 0 || n > s.nA) out.push_back({K::Pattern, "index set for arity " + std::to_string(n) + " beyond nA"});
  for (auto k : s.slots()) {
    auto it = s.pred.find(k);
    if (it == s.pred.end() || it->second.size() != tuple_count(s.size(), k.n)) {
      out.push_back({K::Totality, pred_name(k) + " missing"});
      continue;
    }
    bool total = true;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const auto& v = it->second[i];
      if (!v) {
        total = false;
        out.push_back({K::Totality, pred_name(k) + " undefined at " + tuple_str(s.metric, decode_tuple(i, s.size(), k.n))});
      } else if (v->sign() < 0) {
        out.push_back({K::Negative, pred_name(k) + " negative"});
      }
    }
    if (total) detail::table_lipschitz_report(s.metric, k, it->second, out);
  }
  for (const auto& [k, t] : s.pred) {
    auto slots = s.slots();
    if (std::find(slots.begin(), slots.end(), k) == slots.end())
      out.push_back({K::Pattern, pred_name(k) + " defined outside the index sets"});
  }
  return out;
}

// Approximants u^1, u^2, ... of a point of the completion (1-based levels).
struct CauchyPoint {
  std::vector<std::size_t> ids;
  std::vector<Rat> certs;  // certs[j-1] = d(u^j, u^{j+1})

  std::size_t depth() const { return ids.size(); }
  std::size_t at(std::size_t level) const {
    if (level == 0 || level > ids.size())
      throw PreconditionError("level " + std::to_string(level) + " beyond depth " + std::to_string(ids.size()));
    return ids[level - 1];
  }
  std::size_t deepest() const { return ids.back(); }
  friend bool operator==(const CauchyPoint&, const CauchyPoint&) = default;
};

// cert(j) is the snapshot distance and at most 2^-(j+1).
inline std::vector<CheckRecord> cauchy_checks(const LimitOracle& o, const CauchyPoint& p, const std::string& tag) {
  std::vector<CheckRecord> out;
  if (p.certs.size() + 1 != p.ids.size() && !(p.ids.empty() && p.certs.empty()))
    throw PreconditionError("certificate count does not match depth");
  for (std::size_t j = 1; j < p.ids.size(); ++j) {
    auto name = tag + ".gap." + std::to_string(j);
    out.push_back(make_check(name + ".snapshot", p.certs[j - 1], "=", o.d(p.ids[j - 1], p.ids[j])));
    out.push_back(make_check(name + ".bound", p.certs[j - 1], "<=", Rat::dyadic(static_cast<unsigned>(j) + 1)));
  }
  return out;
}

// Sum of the certified gaps from level j on.
inline Rat tail_bound(const CauchyPoint& p, std::size_t level) {
  Rat s(0);
  for (std::size_t j = level; j < p.ids.size(); ++j) s += p.certs[j - 1];
  return s;
}

}  // namespace urysohn
