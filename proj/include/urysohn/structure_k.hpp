#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/metric.hpp"
#include "urysohn/tuples.hpp"

namespace urysohn {

struct PredKey {
  unsigned n = 0;  // arity
  unsigned m = 0;  // index, 1-based
  friend auto operator<=>(const PredKey&, const PredKey&) = default;
};

inline std::string pred_name(PredKey k) { return "p_" + std::to_string(k.m) + "^" + std::to_string(k.n); }

// Values over all n-tuples in lexicographic order; nullopt = undefined.
using PredTable = std::vector<std::optional<Rat>>;

// One predicate per listed arity; slot (n, j) is the j-th listed predicate of
// arity n. Isomorphisms may not permute predicates in this mode.
struct FixedArityConfig {
  std::vector<unsigned> arities;
  friend bool operator==(const FixedArityConfig&, const FixedArityConfig&) = default;
};

struct StructureK {
  FinMetric metric;
  unsigned nA = 0;
  std::optional<FixedArityConfig> fixed;
  std::map<PredKey, PredTable> pred;

  std::size_t size() const { return metric.size(); }

  // Slots required by the totality pattern.
  std::vector<PredKey> slots() const {
    std::vector<PredKey> out;
    if (fixed) {
      std::map<unsigned, unsigned> seen;
      for (auto n : fixed->arities) out.push_back({n, ++seen[n]});
      return out;
    }
    for (unsigned n = 1; n <= nA; ++n)
      for (unsigned m = 1; m <= nA + 1 - n; ++m) out.push_back({n, m});
    return out;
  }

  const Rat& value(PredKey k, const Tuple& t) const {
    auto it = pred.find(k);
    if (it == pred.end()) throw StructuralError(pred_name(k) + " is not defined");
    const auto& v = it->second.at(encode_tuple(t, size()));
    if (!v) throw StructuralError(pred_name(k) + " undefined at " + tuple_str(metric, t));
    return *v;
  }
  void set(PredKey k, const Tuple& t, const Rat& v) {
    auto& table = pred[k];
    table.resize(tuple_count(size(), k.n));
    table[encode_tuple(t, size())] = v;
  }

  // All slots of the pattern, every value zero.
  static StructureK zero(FinMetric metric, std::optional<unsigned> nA = std::nullopt) {
    StructureK s;
    s.metric = std::move(metric);
    s.nA = nA ? *nA : static_cast<unsigned>(s.metric.size());
    for (auto k : s.slots()) s.pred[k] = PredTable(tuple_count(s.size(), k.n), Rat(0));
    return s;
  }
  static StructureK zero_fixed(FinMetric metric, FixedArityConfig cfg) {
    StructureK s;
    s.metric = std::move(metric);
    s.fixed = std::move(cfg);
    for (auto k : s.slots()) s.pred[k] = PredTable(tuple_count(s.size(), k.n), Rat(0));
    return s;
  }

  friend bool operator==(const StructureK&, const StructureK&) = default;
};

struct KViolation {
  enum class Kind { Metric, ArityBound, Totality, Pattern, Negative, Lipschitz };
  Kind kind;
  std::string message;
};

namespace detail {

// Checks p(a) <= p(b) + d(a,b) over every pair of defined entries.
inline void table_lipschitz_report(const FinMetric& m, PredKey k, const PredTable& t,
                              std::vector<KViolation>& out, std::size_t limit = 64) {
  std::vector<std::size_t> defined;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i]) defined.push_back(i);
  std::vector<Tuple> dec;
  dec.reserve(defined.size());
  for (auto i : defined) dec.push_back(decode_tuple(i, m.size(), k.n));
  for (std::size_t a = 0; a < defined.size(); ++a)
    for (std::size_t b = 0; b < defined.size(); ++b) {
      if (a == b) continue;
      const Rat& pa = *t[defined[a]];
      const Rat& pb = *t[defined[b]];
      if (pa <= pb) continue;
      Rat rhs = pb + tuple_distance(m, dec[a], dec[b]);
      if (pa > rhs) {
        if (out.size() >= limit) return;
        out.push_back({KViolation::Kind::Lipschitz, "the Lipschitz condition fails for " + pred_name(k) + " at " +
                                                         tuple_str(m, dec[a]) + " vs " + tuple_str(m, dec[b]) +
                                                         ": " + pa.str() + " > " + rhs.str()});
      }
    }
}

}  // namespace detail

inline std::vector<KViolation> validate_k(const StructureK& s) {
  using K = KViolation::Kind;
  std::vector<KViolation> out;
  try {
    for (const auto& v : validate_metric(s.metric)) out.push_back({K::Metric, v.message});
  } catch (const StructuralError& e) {
    out.push_back({K::Totality, e.what()});
    return out;
  }
  if (!s.fixed) {
    if (s.size() == 0 && s.nA != 0) out.push_back({K::ArityBound, "empty structure must have nA = 0"});
    if (s.size() > 0 && (s.nA == 0 || s.nA > s.size()))
      out.push_back({K::ArityBound, "nA = " + std::to_string(s.nA) + " outside 1.." + std::to_string(s.size())});
  } else if (!std::is_sorted(s.fixed->arities.begin(), s.fixed->arities.end())) {
    out.push_back({K::ArityBound, "fixed arities must be nondecreasing"});
  }
  auto expected = s.slots();
  for (auto k : expected)
    if (!s.pred.count(k)) out.push_back({K::Totality, pred_name(k) + " missing"});
  for (const auto& [k, table] : s.pred) {
    if (std::find(expected.begin(), expected.end(), k) == expected.end()) {
      out.push_back({K::Pattern, pred_name(k) + " defined outside the pattern"});
      continue;
    }
    if (table.size() != tuple_count(s.size(), k.n)) {
      out.push_back({K::Totality, pred_name(k) + " table has wrong size"});
      continue;
    }
    bool total = true;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) {
        out.push_back({K::Totality, pred_name(k) + " undefined at " +
                                        tuple_str(s.metric, decode_tuple(i, s.size(), k.n))});
        total = false;
      } else if (table[i]->sign() < 0) {
        out.push_back({K::Negative, pred_name(k) + " negative at " +
                                        tuple_str(s.metric, decode_tuple(i, s.size(), k.n))});
      }
    }
    if (total) detail::table_lipschitz_report(s.metric, k, table, out);
  }
  return out;
}

struct EmbeddingWitnessK {
  std::vector<std::size_t> phi;                  // point of a -> point of b
  std::map<unsigned, std::vector<unsigned>> pi;  // pi[n][m-1] = image index (1-based)

  static EmbeddingWitnessK identity(const StructureK& s) {
    EmbeddingWitnessK w;
    w.phi.resize(s.size());
    std::iota(w.phi.begin(), w.phi.end(), std::size_t{0});
    if (!s.fixed)
      for (unsigned n = 1; n <= s.nA; ++n) {
        auto& p = w.pi[n];
        p.resize(s.nA + 1 - n);
        std::iota(p.begin(), p.end(), 1u);
      }
    return w;
  }
  friend bool operator==(const EmbeddingWitnessK&, const EmbeddingWitnessK&) = default;
};

struct Check {
  bool ok = true;
  std::string failure;
  explicit operator bool() const { return ok; }
};

inline PredKey transport(const EmbeddingWitnessK& w, PredKey k, bool fixed) {
  if (fixed) return k;
  return {k.n, w.pi.at(k.n).at(k.m - 1)};
}

inline Check check_embedding_k(const StructureK& a, const StructureK& b, const EmbeddingWitnessK& w) {
  if (w.phi.size() != a.size()) throw PreconditionError("phi has wrong size");
  std::vector<bool> hit(b.size(), false);
  for (auto v : w.phi) {
    if (v >= b.size() || hit[v]) throw PreconditionError("phi is not injective into b");
    hit[v] = true;
  }
  if (a.fixed || b.fixed) {
    if (!(a.fixed && b.fixed && *a.fixed == *b.fixed))
      throw PreconditionError("fixed-arity embedding needs equal configurations");
    for (const auto& [n, p] : w.pi)
      for (unsigned m = 1; m <= p.size(); ++m)
        if (p[m - 1] != m) throw PreconditionError("index permutations are not allowed in fixed-arity mode");
  } else {
    for (unsigned n = 1; n <= a.nA; ++n) {
      auto it = w.pi.find(n);
      if (it == w.pi.end() || it->second.size() != a.nA + 1 - n)
        throw PreconditionError("pi_" + std::to_string(n) + " missing or of wrong length");
      std::vector<bool> used(b.nA + 2, false);
      for (auto m : it->second) {
        if (n > b.nA || m < 1 || m > b.nA + 1 - n || used[m])
          throw PreconditionError("pi_" + std::to_string(n) + " not an injection into 1.." +
                                  std::to_string(n > b.nA ? 0 : b.nA + 1 - n));
        used[m] = true;
      }
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a.metric(i, j) != b.metric(w.phi[i], w.phi[j]))
        return {false, "distance d(" + a.metric.id(i) + "," + a.metric.id(j) + ") = " + a.metric(i, j).str() +
                           " maps to " + b.metric(w.phi[i], w.phi[j]).str()};
  for (auto k : a.slots()) {
    auto kb = transport(w, k, a.fixed.has_value());
    for (std::size_t t = 0; t < tuple_count(a.size(), k.n); ++t) {
      auto tup = decode_tuple(t, a.size(), k.n);
      Tuple img(tup.size());
      for (std::size_t c = 0; c < tup.size(); ++c) img[c] = w.phi[tup[c]];
      const Rat& va = a.value(k, tup);
      const Rat& vb = b.value(kb, img);
      if (va != vb)
        return {false, pred_name(k) + tuple_str(a.metric, tup) + " = " + va.str() + " but " + pred_name(kb) +
                           tuple_str(b.metric, img) + " = " + vb.str()};
    }
  }
  return {};
}

// Fills every undefined tuple by max{0, max(p(d') - d(d', d))} over the
// defined ones. Throws if the defined values already violate the Lipschitz condition.
inline PredTable canonical_extend(const FinMetric& m, unsigned n, const PredTable& partial) {
  if (partial.size() != tuple_count(m.size(), n)) throw PreconditionError("table has wrong size");
  std::vector<KViolation> bad;
  detail::table_lipschitz_report(m, {n, 0}, partial, bad, 1);
  if (!bad.empty()) throw PreconditionError("partial table inconsistent: " + bad.front().message);
  std::vector<std::pair<Tuple, Rat>> defined;
  for (std::size_t i = 0; i < partial.size(); ++i)
    if (partial[i]) defined.emplace_back(decode_tuple(i, m.size(), n), *partial[i]);
  PredTable out = partial;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i]) continue;
    auto t = decode_tuple(i, m.size(), n);
    Rat best(0);
    for (const auto& [dt, v] : defined) {
      if (v <= best) continue;
      Rat c = v - tuple_distance(m, dt, t);
      if (c > best) best = c;
    }
    out[i] = best;
  }
  return out;
}

namespace detail {

// Lex-first injective assignment m -> pi[m] with ok[m][pi[m]] true.
inline bool first_matching(const std::vector<std::vector<bool>>& ok, std::vector<unsigned>& pi,
                           std::vector<bool>& used, std::size_t m) {
  if (m == ok.size()) return true;
  for (std::size_t c = 0; c < ok[m].size(); ++c) {
    if (used[c] || !ok[m][c]) continue;
    used[c] = true;
    pi[m] = static_cast<unsigned>(c + 1);
    if (first_matching(ok, pi, used, m + 1)) return true;
    used[c] = false;
  }
  return false;
}

}  // namespace detail

inline std::optional<EmbeddingWitnessK> find_isomorphism(const StructureK& a, const StructureK& b) {
  if (a.size() != b.size() || a.fixed != b.fixed) return std::nullopt;
  if (!a.fixed && a.nA != b.nA) return std::nullopt;
  const auto N = a.size();
  std::vector<std::size_t> phi(N);
  std::iota(phi.begin(), phi.end(), std::size_t{0});
  do {
    bool iso = true;
    for (std::size_t i = 0; i < N && iso; ++i)
      for (std::size_t j = i + 1; j < N && iso; ++j) iso = a.metric(i, j) == b.metric(phi[i], phi[j]);
    if (!iso) continue;
    auto agrees = [&](PredKey ka, PredKey kb) {
      for (std::size_t t = 0; t < tuple_count(N, ka.n); ++t) {
        auto tup = decode_tuple(t, N, ka.n);
        Tuple img(tup.size());
        for (std::size_t c = 0; c < tup.size(); ++c) img[c] = phi[tup[c]];
        if (a.value(ka, tup) != b.value(kb, img)) return false;
      }
      return true;
    };
    EmbeddingWitnessK w;
    w.phi = phi;
    bool found = true;
    if (a.fixed) {
      for (auto k : a.slots())
        if (!agrees(k, k)) {
          found = false;
          break;
        }
    } else {
      for (unsigned n = 1; n <= a.nA && found; ++n) {
        const unsigned width = a.nA + 1 - n;
        std::vector<std::vector<bool>> ok(width, std::vector<bool>(width));
        for (unsigned m = 1; m <= width; ++m)
          for (unsigned c = 1; c <= width; ++c) ok[m - 1][c - 1] = agrees({n, m}, {n, c});
        std::vector<unsigned> pi(width);
        std::vector<bool> used(width, false);
        found = detail::first_matching(ok, pi, used, 0);
        w.pi[n] = pi;
      }
    }
    if (found) return w;
  } while (std::next_permutation(phi.begin(), phi.end()));
  return std::nullopt;
}

// Substructure on the given points (in the given order), keeping nA if possible.
inline StructureK restrict_k(const StructureK& s, const std::vector<std::size_t>& idx,
                             std::optional<unsigned> nA = std::nullopt) {
  StructureK out;
  out.metric = s.metric.restrict(idx);
  out.fixed = s.fixed;
  out.nA = nA ? *nA : std::min<unsigned>(s.nA, static_cast<unsigned>(idx.size()));
  for (auto k : out.slots()) {
    PredTable t(tuple_count(idx.size(), k.n));
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto tup = decode_tuple(i, idx.size(), k.n);
      Tuple src(tup.size());
      for (std::size_t c = 0; c < tup.size(); ++c) src[c] = idx[tup[c]];
      t[i] = s.value(k, src);
    }
    out.pred[k] = std::move(t);
  }
  return out;
}

}  // namespace urysohn
