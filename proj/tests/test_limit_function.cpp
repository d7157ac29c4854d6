#include <gtest/gtest.h>

#include "cases.hpp"
#include "oracles.hpp"

using namespace urysohn;

namespace {

PolishPresentation two_dense() {
  PolishPresentation z;
  z.z = FinMetric({"1", "2"});
  z.z.set(0, 1, 1);
  return z;
}

// d_Z(dense(x), dense(y)) <= L d(x, y) across the whole snapshot.
bool snapshot_lipschitz(const LimitOracle& o) {
  for (std::size_t x = 0; x < o.size(); ++x)
    for (std::size_t y = 0; y < o.size(); ++y)
      if (x != y && o.polish()->d(o.dense(x), o.dense(y)) > *o.lipschitz() * o.d(x, y)) return false;
  return true;
}

}  // namespace

TEST(LimitFunction, ConstantIndex) {
  PolishPresentation z;
  z.z = FinMetric({"1", "2", "3", "4", "5", "6"});
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) z.z.set(i, j, 1);
  LimitOracle o;
  o.enable_lipschitz(z, 1);
  StructureL b{FinMetric({"a"}), {4}, 1};
  auto r = extend_one_point_l(o, {}, b, {}, 5);
  for (unsigned l = 1; l <= 5; ++l) EXPECT_EQ(o.dense(r.point.at(l)), 4u);
  auto v = eval_limit_function(o, r.point, 5);
  EXPECT_EQ(v.index, 4u);
  EXPECT_EQ(v.bound, Rat(1, 32));
}

TEST(LimitFunction, TwoPoints) {
  LimitOracle o;
  o.enable_lipschitz(two_dense(), 1);
  StructureL b{FinMetric({"a", "b"}), {0, 1}, 1};
  b.metric.set(0, 1, 1);
  auto sched = depth_schedule(2, 6);
  auto a = extend_one_point_l(o, {}, StructureL{FinMetric({"a"}), {0}, 1}, {}, sched[0]);
  auto r = extend_one_point_l(o, {a.point}, b, {}, sched[1]);
  EXPECT_TRUE(snapshot_lipschitz(o));
  for (const auto& c : r.checks()) EXPECT_TRUE(c.ok) << c.name;
  auto fa = eval_limit_function(o, a.point, 6), fb = eval_limit_function(o, r.point, 6);
  EXPECT_LE(o.polish()->d(fa.index, fb.index), Rat(1) + Rat(2) * Rat::dyadic(6));
}

TEST(LimitFunction, Preconditions) {
  LimitOracle o;
  o.enable_lipschitz(two_dense(), 1);
  StructureL b{FinMetric({"a"}), {0}, 1};
  // index 1 is too far from index 0 for the first step
  EXPECT_THROW(extend_one_point_l(o, {}, b, {1, 0}, 3), PreconditionError);
  EXPECT_THROW(extend_one_point_l(o, {}, b, {0, 1}, 3), PreconditionError);
  EXPECT_THROW(extend_one_point_l(o, {}, StructureL{FinMetric({"a"}), {0}, 2}, {}, 3), PreconditionError);
  auto r = extend_one_point_l(o, {}, b, {}, 2);
  EXPECT_THROW(eval_limit_function(o, r.point, 3), PreconditionError);
  EXPECT_THROW(eval_limit_function(o, r.point, 0), PreconditionError);
  LimitOracle plain;
  EXPECT_THROW(eval_limit_function(plain, r.point, 1), PreconditionError);
  EXPECT_THROW(o.enable_lipschitz(two_dense(), 1), PreconditionError);
}

TEST(LimitFunction, RandomRuns) {
  Rng r(31);
  const unsigned depth = 6;
  int moved = 0;
  for (int c = 0; c < 10; ++c) {
    LimitOracle o;
    auto run = cases::random_lipschitz_run(r, o, depth);
    moved += run.seq.size() > 1;
    const auto& z = *o.polish();
    const Rat L = *o.lipschitz();
    const auto k = static_cast<long>(run.points.size());
    const auto& last = run.points.back();
    for (unsigned j = 1; j < depth; ++j)
      ASSERT_LE(z.d(o.dense(last.at(j)), o.dense(last.at(j + 1))), L / (Rat(k) * Rat(1L << (j + 2))));
    ASSERT_TRUE(snapshot_lipschitz(o)) << "case " << c;
    for (std::size_t a = 0; a < run.points.size(); ++a)
      for (std::size_t b = a + 1; b < run.points.size(); ++b) {
        auto fa = eval_limit_function(o, run.points[a], depth).index;
        auto fb = eval_limit_function(o, run.points[b], depth).index;
        ASSERT_LE(z.d(fa, fb), L * run.s.metric(a, b) + Rat(2) * L * Rat::dyadic(depth)) << "case " << c;
      }
  }
  EXPECT_GT(moved, 0);
}
