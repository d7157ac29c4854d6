#pragma once

// Recomputes per-step deviations of a realized point from the oracle's raw
// distances and values.

#include "oracles.hpp"
#include "urysohn/extension.hpp"

namespace oracle {

using urysohn::Rat;

struct StepDeviation {
  Rat metric{0};                 // largest |d(u^l, a_i^(k+l+2)) - target|
  std::map<unsigned, Rat> pred;  // arity -> largest |value - target| on tuples through u^l
};

struct TrackedPred {
  urysohn::GlobalPred g;
  unsigned n;
  urysohn::PredTable values;  // over the target's points
};

// The target metric lists the anchors' ideal points then the new one.
inline StepDeviation step_deviation(const urysohn::LimitOracle& o, const std::vector<urysohn::CauchyPoint>& anchors,
                                    const FinMetric& target, const std::vector<TrackedPred>& preds,
                                    const urysohn::CauchyPoint& point, unsigned l) {
  const auto k = anchors.size() + 1;
  std::vector<std::size_t> S;
  for (const auto& a : anchors) S.push_back(a.at(k + l + 2));
  std::size_t u = point.at(l);
  StepDeviation out;
  for (std::size_t i = 0; i < S.size(); ++i)
    out.metric = urysohn::max(out.metric, urysohn::abs(o.d(S[i], u) - target(i, k - 1)));
  S.push_back(u);
  for (const auto& p : preds) {
    auto& worst = out.pred[p.n];
    for (const auto& tup : tuples(k, p.n)) {
      if (std::find(tup.begin(), tup.end(), k - 1) == tup.end()) continue;
      urysohn::Tuple g;
      std::size_t idx = 0;
      for (auto c : tup) {
        g.push_back(S[c]);
        idx = idx * k + c;
      }
      worst = urysohn::max(worst, urysohn::abs(o.value(p.g, g) - *p.values[idx]));
    }
  }
  return out;
}

inline StepDeviation step_deviation(const urysohn::LimitOracle& o, const std::vector<urysohn::CauchyPoint>& anchors,
                                    const urysohn::PointTarget& t, const urysohn::ExtendResult& r, unsigned l) {
  std::vector<TrackedPred> preds;
  for (std::size_t q = 0; q < t.preds.size(); ++q) preds.push_back({r.globals[q], t.preds[q].n, t.preds[q].values});
  return step_deviation(o, anchors, t.metric, preds, r.point, l);
}

// Steps of embed_structure: point i sees the first i+1 points, with nB =
// min(i+1, nA), and the j-th index of I_n active once j <= nB - n + 1.
inline std::vector<StepDeviation> embed_deviation(const urysohn::LimitOracle& o, const urysohn::BarStructureK& x,
                                                  const urysohn::EmbeddedStructure& e, unsigned depth) {
  std::vector<StepDeviation> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto count = i + 1;
    const unsigned nB = std::min<unsigned>(static_cast<unsigned>(count), x.nA);
    std::vector<std::size_t> first(count);
    for (std::size_t c = 0; c < count; ++c) first[c] = c;
    std::vector<TrackedPred> preds;
    for (const auto& [n, set] : x.index_sets)
      for (std::size_t j = 1; j <= set.size(); ++j) {
        if (n > nB || j > nB - n + 1) continue;
        urysohn::PredKey key{n, set[j - 1]};
        TrackedPred p{e.slots.at(key), n, {}};
        for (const auto& t : tuples(count, n)) p.values.push_back(x.value(key, t));
        preds.push_back(std::move(p));
      }
    std::vector<urysohn::CauchyPoint> anchors(e.points.begin(), e.points.begin() + static_cast<long>(i));
    for (unsigned l = 1; l <= depth; ++l) {
      auto d = step_deviation(o, anchors, x.metric.restrict(first), preds, e.points[i], l);
      if (out.size() < l) out.resize(l);
      out[l - 1].metric = urysohn::max(out[l - 1].metric, d.metric);
      for (const auto& [n, v] : d.pred) out[l - 1].pred[n] = urysohn::max(out[l - 1].pred[n], v);
    }
  }
  return out;
}

inline Rat pred_bound(unsigned n, unsigned l) { return Rat(2 * static_cast<long>(n) + 1) * Rat::dyadic(l); }

}  // namespace oracle

namespace oracle {

// Target of extend_one_point laid out as it sees it: phi's image, then the rest.
inline urysohn::PointTarget one_point_target(const urysohn::BarStructureK& b, const std::vector<std::size_t>& phi) {
  std::vector<std::size_t> order = phi;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (std::find(phi.begin(), phi.end(), i) == phi.end()) order.push_back(i);
  urysohn::PointTarget t;
  t.metric = b.metric.restrict(order);
  for (auto key : b.slots()) {
    urysohn::TargetPred p;
    p.n = key.n;
    for (const auto& tup : tuples(order.size(), key.n)) {
      urysohn::Tuple img;
      for (auto c : tup) img.push_back(order[c]);
      p.values.push_back(b.value(key, img));
    }
    t.preds.push_back(std::move(p));
  }
  return t;
}

}  // namespace oracle
