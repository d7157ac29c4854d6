#pragma once

#include <string>
#include <vector>

#include "urysohn/extension.hpp"
#include "urysohn/suitable.hpp"

namespace urysohn {

// eps_n = distance from (b, q_n) to a finite closed set of pairs (point, dense index).
inline std::vector<Rat> distance_profile(const FinMetric& m, std::size_t b,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& closed,
                                         const CompactPresentation& k) {
  if (closed.empty()) throw PreconditionError("closed set must be nonempty");
  std::vector<Rat> out;
  for (std::size_t n = 0; n < k.size(); ++n) {
    std::optional<Rat> best;
    for (const auto& [x, i] : closed) {
      Rat v = m(b, x) + k.d(n, i);
      if (!best || v < *best) best = v;
    }
    out.push_back(*best);
  }
  return out;
}

// One-point extension in compact mode: target metric lists the anchors' ideal
// points then the new one; eps gives the new point's target over all dense indices.
inline ExtendResult extend_one_point_c(LimitOracle& o, const std::vector<CauchyPoint>& anchors, const FinMetric& metric,
                                       const std::vector<Rat>& eps, unsigned depth,
                                       std::vector<TargetPred> preds = {}) {
  if (!o.compact()) throw PreconditionError("oracle is not in compact mode");
  for (std::size_t n = 0; n < eps.size(); ++n)
    for (std::size_t m = n + 1; m < eps.size(); ++m)
      if (abs(eps[n] - eps[m]) > o.compact()->d(n, m))
        throw PreconditionError("target is not 1-Lipschitz on K at (" + std::to_string(n + 1) + "," +
                                std::to_string(m + 1) + ")");
  PointTarget t;
  t.metric = metric;
  t.preds = std::move(preds);
  t.suit = eps;
  if (o.polish()) throw PreconditionError("combined compact and Lipschitz targets need extend_point");
  return extend_point(o, anchors, t, depth, "compact");
}

struct ZeroWitness {
  std::size_t point;
  Rat q;
  bool grown = false;
};

// Grows v with d(u,v) = q and p(v) = max(0, p(u) - q), so p(v)(n) = 0.
inline ZeroWitness realize_zero_witness(LimitOracle& o, std::size_t u, std::size_t n, const Rat& eps) {
  if (eps.sign() <= 0) throw PreconditionError("eps must be positive");
  if (!o.compact()) throw PreconditionError("oracle is not in compact mode");
  if (u >= o.size()) throw PreconditionError("point not in the oracle");
  const auto& K = *o.compact();
  Rat q = o.suit_value(u, n);
  if (q.is_zero()) return {u, q, false};
  SuitableFn f;
  for (std::size_t i = 0; i < K.size(); ++i) {
    Rat r = o.suit_value(u, i);
    if (r > q) f.r[i] = r - q;
  }
  ExtensionRequest req;
  req.base = {u};
  req.ext.metric.add_point(o.id(u));
  req.ext.metric.add_point(fresh_id("v", req.ext.metric));
  req.ext.metric.set(0, 1, q);
  req.ext.fixed = FixedArityConfig{};
  req.suit = std::move(f);
  if (o.polish()) req.dense = o.dense(u);
  auto r = o.realize_extension(req);
  return {r.point, q, true};
}

enum class Membership { In, Out, Unknown };

inline const char* membership_name(Membership m) {
  switch (m) {
    case Membership::In: return "IN";
    case Membership::Out: return "OUT";
    default: return "UNKNOWN";
  }
}

struct MembershipReport {
  Membership verdict = Membership::Unknown;
  std::optional<Rat> value;
  Rat threshold{0};
};

// Reads p(u^depth)(n); the threshold 2^-(depth-1) is relative to the precision.
inline MembershipReport membership_c(const LimitOracle& o, const CauchyPoint& a, std::size_t n, unsigned depth) {
  MembershipReport r;
  if (depth == 0) throw PreconditionError("depth must be positive");
  r.threshold = Rat::dyadic(depth - 1);
  if (a.depth() < depth || a.certs.size() + 1 < depth || !o.compact()) return r;
  r.value = o.suit_value(a.at(depth), n);
  r.verdict = *r.value > r.threshold ? Membership::Out : Membership::In;
  return r;
}

}  // namespace urysohn
