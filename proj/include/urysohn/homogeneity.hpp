#pragma once

#include <map>
#include <string>
#include <vector>

#include "urysohn/extension.hpp"

namespace urysohn {

// Finite partial isomorphism between two families of Cauchy points of one
// oracle: side1[i] <-> side2[i], predicate g of side 1 <-> preds[g] of side 2.
struct PartialIso {
  std::vector<CauchyPoint> side1, side2;
  std::map<GlobalPred, GlobalPred> preds;
};

// Compares the deepest approximants of matched points.
inline std::vector<CheckRecord> witness_checks(const LimitOracle& o, const PartialIso& w, const Rat& tol,
                                               const std::string& tag = "witness") {
  if (w.side1.size() != w.side2.size()) throw PreconditionError("witness sides differ in size");
  std::vector<CheckRecord> out;
  const auto n = w.side1.size();
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    if (w.side1[i].ids.empty() || w.side2[i].ids.empty()) throw PreconditionError("witness point without approximants");
    a.push_back(w.side1[i].deepest());
    b.push_back(w.side2[i].deepest());
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.push_back(make_check(tag + ".d." + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                               abs(o.d(a[i], a[j]) - o.d(b[i], b[j])), "<=", tol));
  for (const auto& [g1, g2] : w.preds) {
    if (g1.n != g2.n) throw PreconditionError("witness pairs predicates of different arity");
    for (std::size_t t = 0; t < tuple_count(n, g1.n); ++t) {
      auto tup = decode_tuple(t, n, g1.n);
      Tuple t1(tup.size()), t2(tup.size());
      std::string label;
      for (std::size_t c = 0; c < tup.size(); ++c) {
        t1[c] = a[tup[c]];
        t2[c] = b[tup[c]];
        label += (c ? "_" : "") + std::to_string(tup[c] + 1);
      }
      out.push_back(make_check(tag + "." + global_name(g1) + "." + label, abs(o.value(g1, t1) - o.value(g2, t2)), "<=",
                               tol));
    }
  }
  return out;
}

struct BackAndForthResult {
  PartialIso witness;
  std::vector<ExtendResult> rounds;
  std::vector<unsigned> depths;
};

// Realizes the point w, seen over `from`, as a new point over `to`.
inline ExtendResult absorb_point(LimitOracle& o, const std::vector<CauchyPoint>& from,
                                 const std::vector<CauchyPoint>& to, const CauchyPoint& w,
                                 const std::vector<std::pair<GlobalPred, GlobalPred>>& preds, unsigned depth,
                                 const std::string& tag) {
  std::vector<std::size_t> pts;
  for (const auto& p : from) pts.push_back(p.deepest());
  pts.push_back(w.deepest());
  PointTarget t;
  t.metric = o.metric().restrict(pts);
  for (const auto& [gf, gt] : preds) {
    TargetPred p;
    p.n = gf.n;
    p.realized = gt;
    p.values.resize(tuple_count(pts.size(), gf.n));
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      auto tup = decode_tuple(i, pts.size(), gf.n);
      for (auto& c : tup) c = pts[c];
      p.values[i] = o.value(gf, tup);
    }
    t.preds.push_back(std::move(p));
  }
  if (o.compact()) t.suit = eval_all(o.suit(w.deepest()), *o.compact());
  if (o.polish()) t.dense = {o.dense(w.deepest())};
  return extend_point(o, to, t, depth, tag);
}

struct BackAndForthPlan {
  std::vector<std::pair<int, std::size_t>> order;  // side the wishlist point lives on, position
  std::vector<unsigned> depths;                    // partner depth per round
  unsigned initial_floor = 0;                      // depth the matched points need
  std::vector<unsigned> floor1, floor2;            // depth each wishlist point needs
};

// Rounds alternate sides. Partner depths follow the embed_structure schedule
// so that every partner can anchor the later rounds.
inline BackAndForthPlan plan_back_and_forth(std::size_t c0, std::size_t n1, std::size_t n2, unsigned depth) {
  BackAndForthPlan p;
  for (std::size_t i = 0; i < std::max(n1, n2); ++i) {
    if (i < n1) p.order.emplace_back(1, i);
    if (i < n2) p.order.emplace_back(2, i);
  }
  const auto R = p.order.size();
  auto need = [&](std::size_t s) { return static_cast<unsigned>(c0 + s + 1) + p.depths[s] + 2; };
  p.depths.assign(R, depth);
  for (std::size_t r = R; r-- > 0;)
    for (std::size_t s = r + 1; s < R; ++s) p.depths[r] = std::max(p.depths[r], need(s));
  p.initial_floor = depth;
  for (std::size_t s = 0; s < R; ++s) p.initial_floor = std::max(p.initial_floor, need(s));
  p.floor1.assign(n1, depth);
  p.floor2.assign(n2, depth);
  for (std::size_t r = 0; r < R; ++r) {
    auto [side, i] = p.order[r];
    auto& f = side == 1 ? p.floor1[i] : p.floor2[i];
    // anchors of round s live on the side opposite to the point absorbed there
    for (std::size_t s = r + 1; s < R; ++s)
      if (p.order[s].first != side) f = std::max(f, need(s));
  }
  return p;
}

// One back-and-forth round per wishlist point.
inline BackAndForthResult extend_partial_iso(LimitOracle& o, const PartialIso& w,
                                             const std::vector<CauchyPoint>& wishlist1,
                                             const std::vector<CauchyPoint>& wishlist2, unsigned depth) {
  if (depth == 0) throw PreconditionError("depth must be positive");
  auto input = witness_checks(o, w, Rat::dyadic(depth), "input");
  for (const auto& c : input)
    if (!c.ok)
      throw PreconditionError("witness tolerance violated: " + c.name + " " + c.lhs.str() + " > " + c.rhs.str());
  auto pl = plan_back_and_forth(w.side1.size(), wishlist1.size(), wishlist2.size(), depth);
  const auto& plan = pl.order;
  const auto& d = pl.depths;

  BackAndForthResult res;
  res.witness = w;
  res.depths = d;
  auto& wit = res.witness;
  for (std::size_t r = 0; r < plan.size(); ++r) {
    const auto [side, i] = plan[r];
    const std::string tag = "round" + std::to_string(r + 1);
    if (side == 1) {
      std::vector<std::pair<GlobalPred, GlobalPred>> preds(wit.preds.begin(), wit.preds.end());
      auto e = absorb_point(o, wit.side1, wit.side2, wishlist1[i], preds, d[r], tag);
      wit.side1.push_back(wishlist1[i]);
      wit.side2.push_back(e.point);
      res.rounds.push_back(std::move(e));
    } else {
      std::vector<std::pair<GlobalPred, GlobalPred>> preds;
      for (const auto& [g1, g2] : wit.preds) preds.emplace_back(g2, g1);
      auto e = absorb_point(o, wit.side2, wit.side1, wishlist2[i], preds, d[r], tag);
      wit.side2.push_back(wishlist2[i]);
      wit.side1.push_back(e.point);
      res.rounds.push_back(std::move(e));
    }
  }
  return res;
}

}  // namespace urysohn
