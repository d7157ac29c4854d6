#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/cauchy.hpp"
#include "urysohn/oracle.hpp"
#include "urysohn/sandwich.hpp"

namespace urysohn {

struct TargetPred {
  unsigned n = 1;
  PredTable values;                    // over the target's points
  std::optional<GlobalPred> realized;  // predicate already tracking these values on the anchors
};

// Ideal one-point extension: anchors' points first (in anchor order), the new
// point last.
struct PointTarget {
  FinMetric metric;
  std::vector<TargetPred> preds;
  std::optional<std::vector<Rat>> suit;  // compact mode: target over dense indices
  std::vector<std::size_t> dense;        // Lipschitz mode: index per level, last one repeats
};

struct StepReport {
  unsigned level = 0;
  SandwichMethod method = SandwichMethod::Bands;
  std::optional<std::string> bands_failure;  // why the staggered bands were not used
  std::vector<CheckRecord> checks;
  std::map<unsigned, Rat> pred_deviation;  // arity -> largest |value - target| on new tuples
  std::optional<Rat> suit_deviation;
};

struct ExtendResult {
  CauchyPoint point;
  std::vector<GlobalPred> globals;  // per target predicate
  std::vector<StepReport> steps;
  std::map<unsigned, Rat> seed_deviation;

  std::vector<CheckRecord> checks() const {
    std::vector<CheckRecord> out;
    for (const auto& s : steps) out.insert(out.end(), s.checks.begin(), s.checks.end());
    return out;
  }
  std::size_t fallback_steps() const {
    return static_cast<std::size_t>(std::count_if(
        steps.begin(), steps.end(), [](const StepReport& s) { return s.method != SandwichMethod::Bands; }));
  }
};

inline std::size_t dense_at(const std::vector<std::size_t>& seq, unsigned level) {
  return seq.at(std::min<std::size_t>(level, seq.size()) - 1);
}

namespace detail {

struct Entry {
  Tuple tuple;
  Rat value;
};

// Value nearest to r that stays consistent with the defined entries.
inline Rat clamp_consistent(const FinMetric& m, const Tuple& t, const Rat& r, const std::vector<Entry>& defined) {
  std::optional<Rat> lo, hi;
  for (const auto& e : defined) {
    Rat dist = tuple_distance(m, t, e.tuple);
    Rat a = e.value - dist, b = e.value + dist;
    if (!lo || a > *lo) lo = a;
    if (!hi || b < *hi) hi = b;
  }
  Rat v = r;
  if (lo && v < *lo) v = *lo;
  if (hi && v > *hi) v = *hi;
  return v;
}

inline void check_target(const LimitOracle& o, const std::vector<CauchyPoint>& anchors, const PointTarget& t,
                         unsigned depth) {
  const auto k = anchors.size() + 1;
  if (depth == 0) throw PreconditionError("depth must be positive");
  if (t.metric.size() != k) throw PreconditionError("target must have one point beyond the anchors");
  for (const auto& a : anchors) {
    for (auto id : a.ids)
      if (id >= o.size()) throw PreconditionError("A points not in the oracle");
    if (a.depth() < k + depth + 2)
      throw PreconditionError("anchors too shallow: depth " + std::to_string(k + depth + 2) + " needed, have " +
                              std::to_string(a.depth()));
  }
  if (auto v = validate_metric(t.metric); !v.empty()) throw PreconditionError("target metric: " + v.front().message);
  for (const auto& p : t.preds) {
    if (p.values.size() != tuple_count(k, p.n)) throw PreconditionError("target table has wrong size");
    for (const auto& v : p.values)
      if (!v || v->sign() < 0) throw PreconditionError("target table must be total and nonnegative");
    std::vector<KViolation> bad;
    detail::table_lipschitz_report(t.metric, {p.n, 0}, p.values, bad, 1);
    if (!bad.empty()) throw PreconditionError("target predicate inconsistent: " + bad.front().message);
    if (p.realized && (!o.has_predicate(*p.realized) || p.realized->n != p.n))
      throw PreconditionError(global_name(*p.realized) + " is not a realized predicate of arity " + std::to_string(p.n));
  }
  if (o.compact().has_value() != t.suit.has_value())
    throw PreconditionError("suitable targets are required exactly in compact mode");
  if (t.suit) {
    if (t.suit->size() != o.compact()->size()) throw PreconditionError("suitable target has wrong length");
    for (const auto& v : *t.suit)
      if (v.sign() < 0) throw PreconditionError("suitable target must be nonnegative");
  }
  if (o.polish().has_value() != !t.dense.empty())
    throw PreconditionError("dense index targets are required exactly in Lipschitz mode");
  if (!t.dense.empty()) {
    for (auto i : t.dense)
      if (i >= o.polish()->size()) throw PreconditionError("dense index out of range");
    for (unsigned j = 1; j < depth; ++j) {
      Rat step = o.polish()->d(dense_at(t.dense, j), dense_at(t.dense, j + 1));
      Rat bound = *o.lipschitz() * Rat::dyadic(j + 2) / Rat(static_cast<long>(k));
      if (step > bound)
        throw PreconditionError("target modulus violated at level " + std::to_string(j) + ": " + step.str() + " > " +
                                bound.str());
    }
  }
}

}  // namespace detail

// Builds approximants u^1..u^depth of the new point. Step l places u^l near
// the anchors' approximants at level k+l+2 and at distance 2^-l from u^(l-1).
inline ExtendResult extend_point(LimitOracle& o, const std::vector<CauchyPoint>& anchors, const PointTarget& t,
                                 unsigned depth, const std::string& tag = "point") {
  detail::check_target(o, anchors, t, depth);
  const std::size_t k = anchors.size() + 1;
  const auto np = t.preds.size();
  ExtendResult res;
  res.globals.resize(np);

  // Fresh predicates first receive values on the deepest approximants.
  std::vector<std::size_t> deep;
  for (const auto& a : anchors) deep.push_back(a.deepest());
  std::vector<bool> known(np, false);
  for (std::size_t q = 0; q < np; ++q) {
    const auto& p = t.preds[q];
    if (p.realized) {
      res.globals[q] = *p.realized;
      known[q] = true;
    } else if (k >= 2) {
      FinMetric sub = o.metric().restrict(deep);
      std::vector<detail::Entry> entries;
      Rat worst(0);
      for (std::size_t i = 0; i < tuple_count(k - 1, p.n); ++i) {
        auto tup = decode_tuple(i, k - 1, p.n);
        const Rat& r = *p.values[encode_tuple(tup, k)];
        Rat v = detail::clamp_consistent(sub, tup, r, entries);
        worst = max(worst, abs(v - r));
        entries.push_back({tup, v});
      }
      std::vector<std::pair<Tuple, Rat>> seeded;
      for (auto& e : entries) {
        Tuple g(e.tuple.size());
        for (std::size_t c = 0; c < g.size(); ++c) g[c] = deep[e.tuple[c]];
        seeded.emplace_back(std::move(g), e.value);
      }
      res.globals[q] = o.seed_predicate(p.n, std::move(seeded));
      res.seed_deviation[p.n] = max(res.seed_deviation.count(p.n) ? res.seed_deviation[p.n] : Rat(0), worst);
      known[q] = true;
    }
  }

  // Slot layout of the extension structures: predicates sorted by arity.
  std::vector<std::size_t> by_arity(np);
  std::iota(by_arity.begin(), by_arity.end(), std::size_t{0});
  std::stable_sort(by_arity.begin(), by_arity.end(),
                   [&](std::size_t a, std::size_t b) { return t.preds[a].n < t.preds[b].n; });
  FixedArityConfig cfg;
  std::vector<PredKey> slot(np);
  {
    std::map<unsigned, unsigned> seen;
    for (auto q : by_arity) {
      cfg.arities.push_back(t.preds[q].n);
      slot[q] = {t.preds[q].n, ++seen[t.preds[q].n]};
    }
  }

  auto& cp = res.point;
  for (unsigned l = 1; l <= depth; ++l) {
    const std::string step_tag = tag + ".step" + std::to_string(l);
    StepReport rep;
    rep.level = l;
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i + 1 < k; ++i) S.push_back(anchors[i].at(k + l + 2));
    const bool has_prev = l > 1;
    if (has_prev) S.push_back(cp.ids.back());
    std::vector<Rat> eta(S.size());
    if (k >= 2) {
      SandwichProblem prob{t.metric, o.metric().restrict(S), l, has_prev};
      SandwichSolution sol;
      try {
        sol = solve_sandwich(prob);
      } catch (const Error& e) {
        rep.bands_failure = e.what();
        try {
          sol = solve_uniform_offset(prob);
        } catch (const InfeasibleError& f) {
          throw InfeasibleError(step_tag + ": " + *rep.bands_failure + "; fallback: " + f.what());
        }
      }
      rep.method = sol.method;
      rep.checks = sandwich_checks(prob, sol, step_tag);
      for (std::size_t i = 0; i + 1 < k; ++i) eta[i] = sol.eta[i];
      if (has_prev) eta.back() = *sol.link;
    } else if (has_prev) {
      eta.back() = Rat::dyadic(l);
    }

    const auto s = S.size();
    StructureK ext;
    for (auto x : S) ext.metric.add_point(o.id(x));
    ext.metric.add_point(fresh_id("new", ext.metric));
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = i + 1; j < s; ++j) ext.metric.set(i, j, o.d(S[i], S[j]));
      ext.metric.set(i, s, eta[i]);
    }
    ext.fixed = cfg;
    auto label = [&](std::size_t x) { return x + 1 < k ? x : k - 1; };

    ExtensionRequest req;
    req.base = S;
    for (std::size_t q = 0; q < np; ++q) {
      const auto& p = t.preds[q];
      PredTable table(tuple_count(s + 1, p.n));
      std::vector<detail::Entry> defined;
      std::vector<std::size_t> fresh_tuples;
      for (std::size_t i = 0; i < table.size(); ++i) {
        auto tup = decode_tuple(i, s + 1, p.n);
        if (std::find(tup.begin(), tup.end(), s) != tup.end()) {
          fresh_tuples.push_back(i);
          continue;
        }
        Tuple g(tup.size());
        for (std::size_t c = 0; c < tup.size(); ++c) g[c] = S[tup[c]];
        table[i] = o.value(res.globals[q], g);
        defined.push_back({tup, *table[i]});
      }
      Rat worst(0);
      for (auto i : fresh_tuples) {
        auto tup = decode_tuple(i, s + 1, p.n);
        Tuple lab(tup.size());
        for (std::size_t c = 0; c < tup.size(); ++c) lab[c] = label(tup[c]);
        const Rat& r = *p.values[encode_tuple(lab, k)];
        Rat v = detail::clamp_consistent(ext.metric, tup, r, defined);
        worst = max(worst, abs(v - r));
        table[i] = v;
        defined.push_back({tup, v});
      }
      ext.pred[slot[q]] = std::move(table);
      rep.pred_deviation[p.n] = max(rep.pred_deviation.count(p.n) ? rep.pred_deviation[p.n] : Rat(0), worst);
      rep.checks.push_back(make_check(step_tag + ".pred" + std::to_string(q + 1) + ".deviation", worst, "<=",
                                      Rat(2 * static_cast<long>(p.n) + 1) * Rat::dyadic(l)));
      if (known[q]) req.realized[slot[q]] = res.globals[q];
    }

    if (t.suit) {
      const auto& K = *o.compact();
      auto F = K.net(Rat::dyadic(l + 2));
      for (auto x : S)
        for (const auto& [i, r] : o.suit(x).r) F.push_back(i);
      std::sort(F.begin(), F.end());
      F.erase(std::unique(F.begin(), F.end()), F.end());
      std::vector<std::pair<std::size_t, Rat>> gamma;
      for (auto i : F) {
        std::optional<Rat> lo, hi;
        for (std::size_t x = 0; x < s; ++x) {
          Rat v = o.suit_value(S[x], i);
          Rat a = v - eta[x], b = v + eta[x];
          if (!lo || a > *lo) lo = a;
          if (!hi || b < *hi) hi = b;
        }
        Rat g = (*t.suit)[i];
        if (lo && g < *lo) g = *lo;
        if (hi && g > *hi) g = *hi;
        gamma.emplace_back(i, g);
      }
      req.suit = build_suitable(gamma, K);
      Rat worst(0);
      for (std::size_t n = 0; n < K.size(); ++n) worst = max(worst, abs(eval_suitable(*req.suit, n, K) - (*t.suit)[n]));
      rep.suit_deviation = worst;
      rep.checks.push_back(make_check(step_tag + ".suit.deviation", worst, "<=", Rat::dyadic(l)));
    }
    if (!t.dense.empty()) {
      req.dense = dense_at(t.dense, l);
      if (l > 1) {
        const auto& z = *o.polish();
        rep.checks.push_back(make_check(step_tag + ".modulus",
                                        z.d(dense_at(t.dense, l - 1), dense_at(t.dense, l)), "<=",
                                        *o.lipschitz() * Rat::dyadic(l + 1) / Rat(static_cast<long>(k))));
      }
    }
    req.ext = std::move(ext);

    ExtensionResult grown;
    try {
      grown = o.realize_extension(req);
    } catch (const GrowthError& e) {
      throw GrowthError(step_tag + ": " + e.what());
    }
    for (std::size_t q = 0; q < np; ++q)
      if (!known[q]) {
        res.globals[q] = grown.slots.at(slot[q]);
        known[q] = true;
      }
    if (t.dense.size() && !S.empty()) {
      const auto& z = *o.polish();
      for (auto x : S)
        rep.checks.push_back(make_check(step_tag + ".lipschitz." + o.id(x), z.d(o.dense(x), *req.dense), "<=",
                                        *o.lipschitz() * o.d(x, grown.point)));
    }
    if (has_prev) {
      cp.certs.push_back(o.d(cp.ids.back(), grown.point));
      rep.checks.push_back(make_check(step_tag + ".gap", cp.certs.back(), "=", Rat::dyadic(l)));
    }
    cp.ids.push_back(grown.point);
    res.steps.push_back(std::move(rep));
  }
  return res;
}

// A finite structure realized by Cauchy points, with its predicates attached
// to predicates of the limit.
struct EmbeddedStructure {
  std::vector<CauchyPoint> points;
  BarStructureK ideal;
  std::map<PredKey, GlobalPred> slots;
};

// Embedding of A into B: points and predicate slots.
struct BarEmbedding {
  std::vector<std::size_t> phi;
  std::map<PredKey, PredKey> slot_map;
};

struct OnePointResult {
  CauchyPoint point;
  std::map<PredKey, GlobalPred> slots;  // every slot of B
  ExtendResult detail;
};

inline Check check_bar_embedding(const BarStructureK& a, const BarStructureK& b, const BarEmbedding& w) {
  if (w.phi.size() != a.size()) throw PreconditionError("phi has wrong size");
  std::vector<bool> hit(b.size(), false);
  for (auto v : w.phi) {
    if (v >= b.size() || hit[v]) throw PreconditionError("phi is not injective into B");
    hit[v] = true;
  }
  std::map<PredKey, bool> used;
  auto bslots = b.slots();
  for (auto k : a.slots()) {
    auto it = w.slot_map.find(k);
    if (it == w.slot_map.end()) throw PreconditionError("index injection misses " + pred_name(k));
    if (it->second.n != k.n || std::find(bslots.begin(), bslots.end(), it->second) == bslots.end() ||
        used[it->second])
      throw PreconditionError("index injection is not an injection at " + pred_name(k));
    used[it->second] = true;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a.metric(i, j) != b.metric(w.phi[i], w.phi[j]))
        return {false, "distance d(" + a.metric.id(i) + "," + a.metric.id(j) + ") not preserved"};
  for (auto k : a.slots()) {
    auto kb = w.slot_map.at(k);
    for (std::size_t t = 0; t < tuple_count(a.size(), k.n); ++t) {
      auto tup = decode_tuple(t, a.size(), k.n);
      Tuple img(tup.size());
      for (std::size_t c = 0; c < tup.size(); ++c) img[c] = w.phi[tup[c]];
      if (a.value(k, tup) != b.value(kb, img))
        return {false, pred_name(k) + " at " + tuple_str(a.metric, tup) + " not preserved"};
    }
  }
  return {};
}

// Realizes the point of B outside the image of A.
inline OnePointResult extend_one_point(const EmbeddedStructure& a, const BarStructureK& b, const BarEmbedding& w,
                                       LimitOracle& o, unsigned depth) {
  if (b.size() != a.ideal.size() + 1) throw PreconditionError("B must have exactly one point more than A");
  if (a.points.size() != a.ideal.size()) throw PreconditionError("one Cauchy point per point of A required");
  if (auto v = validate_bar(b); !v.empty()) throw PreconditionError("B invalid: " + v.front().message);
  if (auto c = check_bar_embedding(a.ideal, b, w); !c) throw PreconditionError("A does not embed into B: " + c.failure);
  std::vector<bool> hit(b.size(), false);
  for (auto v : w.phi) hit[v] = true;
  std::vector<std::size_t> order = w.phi;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!hit[i]) order.push_back(i);

  std::map<PredKey, GlobalPred> realized;
  for (const auto& [ka, kb] : w.slot_map) realized[kb] = a.slots.at(ka);

  PointTarget t;
  t.metric = b.metric.restrict(order);
  std::vector<PredKey> keys = b.slots();
  for (auto kb : keys) {
    TargetPred p;
    p.n = kb.n;
    p.values.resize(tuple_count(order.size(), kb.n));
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      auto tup = decode_tuple(i, order.size(), kb.n);
      for (auto& c : tup) c = order[c];
      p.values[i] = b.value(kb, tup);
    }
    if (auto it = realized.find(kb); it != realized.end()) p.realized = it->second;
    t.preds.push_back(std::move(p));
  }
  OnePointResult out;
  out.detail = extend_point(o, a.points, t, depth, "extend");
  out.point = out.detail.point;
  for (std::size_t q = 0; q < keys.size(); ++q) out.slots[keys[q]] = out.detail.globals[q];
  return out;
}

inline OnePointResult extend_singleton(const BarStructureK& b, LimitOracle& o, unsigned depth) {
  if (b.size() != 1) throw PreconditionError("singleton structure expected");
  return extend_one_point(EmbeddedStructure{}, b, BarEmbedding{}, o, depth);
}

// Levels needed so that every later point finds its anchors.
inline std::vector<unsigned> depth_schedule(std::size_t points, unsigned depth, std::vector<unsigned> floors = {}) {
  std::vector<unsigned> d(points, depth);
  for (std::size_t i = 0; i < std::min(points, floors.size()); ++i) d[i] = std::max(d[i], floors[i]);
  for (std::size_t i = points; i-- > 0;)
    for (std::size_t k = i + 1; k < points; ++k)
      d[i] = std::max<unsigned>(d[i], static_cast<unsigned>(k + 1) + d[k] + 2);
  return d;
}

struct EmbedResult {
  EmbeddedStructure embedded;
  std::vector<ExtendResult> steps;
};

// Point i+1 sees the first i+1 points with nB = min(i+1, nA); the j-th index
// of I_n joins once j <= nB - n + 1.
inline EmbedResult embed_structure(const BarStructureK& x, LimitOracle& o, unsigned depth,
                                   std::vector<unsigned> schedule = {}) {
  if (auto v = validate_bar(x); !v.empty()) throw PreconditionError("structure invalid: " + v.front().message);
  if (schedule.empty()) schedule = depth_schedule(x.size(), depth);
  EmbedResult res;
  res.embedded.ideal = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto count = k + 1;
    const unsigned nB = std::min<unsigned>(static_cast<unsigned>(count), x.nA);
    std::vector<std::size_t> first(count);
    std::iota(first.begin(), first.end(), std::size_t{0});
    PointTarget t;
    t.metric = x.metric.restrict(first);
    std::vector<PredKey> keys;
    for (const auto& [n, set] : x.index_sets)
      for (std::size_t j = 1; j <= set.size(); ++j) {
        if (n > nB || j > nB - n + 1) continue;
        PredKey key{n, set[j - 1]};
        TargetPred p;
        p.n = n;
        p.values.resize(tuple_count(count, n));
        for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = x.value(key, decode_tuple(i, count, n));
        if (auto it = res.embedded.slots.find(key); it != res.embedded.slots.end()) p.realized = it->second;
        keys.push_back(key);
        t.preds.push_back(std::move(p));
      }
    auto r = extend_point(o, res.embedded.points, t, schedule[k], "point" + std::to_string(count));
    for (std::size_t q = 0; q < keys.size(); ++q) res.embedded.slots[keys[q]] = r.globals[q];
    res.embedded.points.push_back(r.point);
    res.steps.push_back(std::move(r));
  }
  return res;
}

}  // namespace urysohn
