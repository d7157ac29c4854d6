#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "urysohn/structure_k.hpp"

namespace urysohn {

struct AmalgamResult {
  StructureK d;
  EmbeddingWitnessK wB;
  EmbeddingWitnessK wC;
};

// Largest distance or predicate value occurring in s.
inline Rat max_value(const StructureK& s) {
  Rat m = s.metric.empty() ? Rat(0) : s.metric.diameter();
  for (const auto& [k, t] : s.pred)
    for (const auto& v : t)
      if (v) m = max(m, *v);
  return m;
}

inline AmalgamResult joint_embed_k(const StructureK& a, const StructureK& b) {
  if (a.fixed != b.fixed) throw PreconditionError("joint embedding needs equal fixed-arity configurations");
  const Rat gap = gap_for(max(max_value(a), max_value(b)));
  auto metric = jep_gap_metric(a.metric, b.metric, gap);
  AmalgamResult r;
  r.d.metric = std::move(metric.d);
  r.d.fixed = a.fixed;
  r.d.nA = std::max(a.nA, b.nA);
  const auto N = r.d.size();
  for (auto k : r.d.slots()) {
    PredTable t(tuple_count(N, k.n), Rat(0));
    auto copy = [&](const StructureK& s, const std::vector<std::size_t>& map) {
      auto it = s.pred.find(k);
      if (it == s.pred.end()) return;
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        auto tup = decode_tuple(i, s.size(), k.n);
        for (auto& c : tup) c = map[c];
        t[encode_tuple(tup, N)] = *it->second[i];
      }
    };
    copy(a, metric.from_b);
    copy(b, metric.from_c);
    r.d.pred[k] = std::move(t);
  }
  r.wB.phi = metric.from_b;
  r.wC.phi = metric.from_c;
  if (!r.d.fixed) {
    for (const auto* s : {&a, &b}) {
      auto& w = s == &a ? r.wB : r.wC;
      for (unsigned n = 1; n <= s->nA; ++n) {
        auto& p = w.pi[n];
        p.resize(s->nA + 1 - n);
        std::iota(p.begin(), p.end(), 1u);
      }
    }
  }
  return r;
}

namespace detail {

// New position of each old index once the images of A's indices are moved to
// the front (in A's order) and the rest follow in increasing order.
inline std::vector<unsigned> front_permutation(const std::vector<unsigned>& images, unsigned width) {
  std::vector<unsigned> pos(width + 1, 0);
  unsigned next = 1;
  for (auto m : images) pos[m] = next++;
  for (unsigned m = 1; m <= width; ++m)
    if (!pos[m]) pos[m] = next++;
  return pos;
}

}  // namespace detail

// Amalgamates b and c over a. C's predicates that are not images of A's are
// shifted by nB - nA; when nD exceeds the number of points, far padding
// points are added so the totality pattern stays admissible.
inline AmalgamResult amalgamate_k(const StructureK& b, const StructureK& c, const StructureK& a,
                                  const EmbeddingWitnessK& wAB, const EmbeddingWitnessK& wAC) {
  if (a.fixed != b.fixed || a.fixed != c.fixed)
    throw PreconditionError("amalgamation needs equal fixed-arity configurations");
  if (auto ck = check_embedding_k(a, b, wAB); !ck) throw PreconditionError("A does not embed into B: " + ck.failure);
  if (auto ck = check_embedding_k(a, c, wAC); !ck) throw PreconditionError("A does not embed into C: " + ck.failure);
  if (a.size() == 0) return joint_embed_k(b, c);

  const bool fixed = a.fixed.has_value();
  // Slot of B (resp. C) -> slot of D.
  std::map<PredKey, PredKey> mapB, mapC;
  if (fixed) {
    for (auto k : b.slots()) mapB[k] = k;
    for (auto k : c.slots()) mapC[k] = k;
  } else {
    for (unsigned n = 1; n <= b.nA; ++n) {
      std::vector<unsigned> img;
      if (n <= a.nA) img = wAB.pi.at(n);
      auto pos = detail::front_permutation(img, b.nA + 1 - n);
      for (unsigned m = 1; m <= b.nA + 1 - n; ++m) mapB[{n, m}] = {n, pos[m]};
    }
    for (unsigned n = 1; n <= c.nA; ++n) {
      std::vector<unsigned> img;
      if (n <= a.nA) img = wAC.pi.at(n);
      auto pos = detail::front_permutation(img, c.nA + 1 - n);
      const unsigned shared = n <= a.nA ? a.nA + 1 - n : 0;
      for (unsigned m = 1; m <= c.nA + 1 - n; ++m) {
        unsigned p = pos[m];
        mapC[{n, m}] = {n, p <= shared ? p : p + b.nA - a.nA};
      }
    }
  }

  auto metric = path_amalgam_metric(b.metric, c.metric, a.metric, wAB.phi, wAC.phi);
  AmalgamResult r;
  r.d.metric = std::move(metric.d);
  r.d.fixed = a.fixed;
  r.d.nA = fixed ? 0 : b.nA + c.nA - a.nA;
  if (!fixed && r.d.nA > r.d.size()) {
    Rat gap = max(r.d.metric.diameter(), Rat(1));
    while (r.d.size() < r.d.nA) {
      auto k = r.d.metric.add_point(fresh_id("pad" + std::to_string(r.d.size()), r.d.metric));
      for (std::size_t i = 0; i < k; ++i) r.d.metric.set(i, k, gap);
    }
  }

  const auto N = r.d.size();
  std::map<PredKey, PredTable> partial;
  for (auto k : r.d.slots()) partial[k] = PredTable(tuple_count(N, k.n));
  auto copy = [&](const StructureK& s, const std::vector<std::size_t>& pts, const std::map<PredKey, PredKey>& map) {
    for (const auto& [ks, kd] : map) {
      const auto& src = s.pred.at(ks);
      auto& dst = partial.at(kd);
      for (std::size_t i = 0; i < src.size(); ++i) {
        auto tup = decode_tuple(i, s.size(), ks.n);
        for (auto& x : tup) x = pts[x];
        auto& slot = dst[encode_tuple(tup, N)];
        if (slot && *slot != *src[i])
          throw PreconditionError("A-tuple " + tuple_str(r.d.metric, tup) + " disagrees on " + pred_name(kd) +
                                  ": " + slot->str() + " vs " + src[i]->str());
        slot = *src[i];
      }
    }
  };
  copy(b, metric.from_b, mapB);
  copy(c, metric.from_c, mapC);
  for (auto& [k, t] : partial) {
    bool any = std::any_of(t.begin(), t.end(), [](const auto& v) { return v.has_value(); });
    if (any) {
      r.d.pred[k] = canonical_extend(r.d.metric, k.n, t);
    } else {
      r.d.pred[k] = PredTable(t.size(), Rat(0));
    }
  }

  auto witness = [&](const StructureK& s, const std::vector<std::size_t>& pts, const std::map<PredKey, PredKey>& map) {
    EmbeddingWitnessK w;
    w.phi = pts;
    if (!fixed)
      for (unsigned n = 1; n <= s.nA; ++n) {
        auto& p = w.pi[n];
        for (unsigned m = 1; m <= s.nA + 1 - n; ++m) p.push_back(map.at({n, m}).m);
      }
    return w;
  };
  r.wB = witness(b, metric.from_b, mapB);
  r.wC = witness(c, metric.from_c, mapC);
  return r;
}

// Composition of witnesses: first u (x -> y), then v (y -> z).
inline EmbeddingWitnessK compose(const EmbeddingWitnessK& u, const EmbeddingWitnessK& v) {
  EmbeddingWitnessK w;
  for (auto p : u.phi) w.phi.push_back(v.phi.at(p));
  for (const auto& [n, p] : u.pi) {
    auto& out = w.pi[n];
    for (auto m : p) out.push_back(v.pi.at(n).at(m - 1));
  }
  return w;
}

}  // namespace urysohn
