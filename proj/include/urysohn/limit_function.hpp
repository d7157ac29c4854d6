#pragma once

#include <string>
#include <vector>

#include "urysohn/extension.hpp"
#include "urysohn/lipschitz.hpp"

namespace urysohn {

// b lists the anchors' ideal points then the new one; b.p of the new point is
// F(b_k). seq, when given, is the index sequence converging to it and must end there.
inline ExtendResult extend_one_point_l(LimitOracle& o, const std::vector<CauchyPoint>& anchors, const StructureL& b,
                                       std::vector<std::size_t> seq, unsigned depth,
                                       std::vector<TargetPred> preds = {}) {
  if (!o.polish()) throw PreconditionError("oracle is not in Lipschitz mode");
  if (b.L != *o.lipschitz()) throw PreconditionError("Lipschitz constant differs from the oracle's");
  if (auto v = validate_l(b, *o.polish()); !v.empty()) throw PreconditionError("B invalid: " + v.front().message);
  if (b.p.empty()) throw PreconditionError("B is empty");
  if (seq.empty()) seq.push_back(b.p.back());
  if (seq.back() != b.p.back()) throw PreconditionError("index sequence must end at the target");
  if (o.compact()) throw PreconditionError("combined compact and Lipschitz targets need extend_point");
  PointTarget t;
  t.metric = b.metric;
  t.preds = std::move(preds);
  t.dense = std::move(seq);
  return extend_point(o, anchors, t, depth, "lipschitz");
}

struct LimitValue {
  std::size_t index;
  Rat bound;  // d_Z(q_index, F(a)) <= bound
};

inline LimitValue eval_limit_function(const LimitOracle& o, const CauchyPoint& a, unsigned depth) {
  if (!o.polish()) throw PreconditionError("oracle is not in Lipschitz mode");
  if (depth == 0 || a.depth() < depth || a.certs.size() + 1 < a.depth())
    throw PreconditionError("missing certificates for depth " + std::to_string(depth));
  return {o.dense(a.at(depth)), *o.lipschitz() * Rat::dyadic(depth)};
}

}  // namespace urysohn
