#pragma once

#include <string>
#include <vector>

#include "urysohn/homogeneity.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

// Adds `extra` points to a, keeping nA, the index sets and a's values.
inline BarStructureK random_bar_extension(Rng& r, const BarStructureK& a, std::size_t extra, long den, long max_num,
                                          const std::string& prefix) {
  BarStructureK b = a;
  for (std::size_t e = 0; e < extra; ++e) {
    auto eta = random_katetov(r, b.metric, den, max_num);
    auto p = b.metric.add_point(fresh_id(prefix + std::to_string(e + 1), b.metric));
    for (std::size_t i = 0; i < p; ++i) b.metric.set(i, p, eta[i]);
  }
  for (auto& [k, table] : b.pred) {
    PredTable t(tuple_count(b.size(), k.n));
    for (std::size_t i = 0; i < table.size(); ++i) t[encode_tuple(decode_tuple(i, a.size(), k.n), b.size())] = table[i];
    table = random_completion(r, b.metric, k.n, std::move(t), den, max_num);
  }
  return b;
}

struct BackAndForthCase {
  PartialIso witness;
  std::vector<CauchyPoint> wishlist1, wishlist2;
  BarStructureK x1, x2;  // ideal data of each side: matched points first
};

// Two realizations of one random base structure, each side with its own
// wishlist points, embedded deep enough for the back-and-forth plan.
inline BackAndForthCase make_back_and_forth_case(Rng& r, LimitOracle& o, std::size_t matched, std::size_t wishes,
                                                 unsigned depth) {
  const long den = r.between(1, 4);
  auto base = random_bar(r, matched, 2, den, 4 * den);
  BackAndForthCase c;
  c.x1 = random_bar_extension(r, base, wishes, den, 4 * den, "w");
  c.x2 = random_bar_extension(r, base, wishes, den, 4 * den, "v");
  auto plan = plan_back_and_forth(matched, wishes, wishes, depth);
  std::vector<unsigned> f1(matched, plan.initial_floor), f2(matched, plan.initial_floor);
  f1.insert(f1.end(), plan.floor1.begin(), plan.floor1.end());
  f2.insert(f2.end(), plan.floor2.begin(), plan.floor2.end());
  auto e1 = embed_structure(c.x1, o, depth, depth_schedule(c.x1.size(), depth, f1));
  auto e2 = embed_structure(c.x2, o, depth, depth_schedule(c.x2.size(), depth, f2));
  for (std::size_t i = 0; i < c.x1.size(); ++i)
    (i < matched ? c.witness.side1 : c.wishlist1).push_back(e1.embedded.points[i]);
  for (std::size_t i = 0; i < c.x2.size(); ++i)
    (i < matched ? c.witness.side2 : c.wishlist2).push_back(e2.embedded.points[i]);
  for (const auto& [k, g] : e1.embedded.slots) c.witness.preds[g] = e2.embedded.slots.at(k);
  return c;
}

}  // namespace urysohn
