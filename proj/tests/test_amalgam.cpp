#include <gtest/gtest.h>

#include "cases.hpp"
#include "oracles.hpp"

using namespace urysohn;

namespace {

StructureK singleton(const std::string& id, const Rat& v) {
  auto s = StructureK::zero(FinMetric({id}), 1);
  s.set({1, 1}, {0}, v);
  return s;
}

}  // namespace

TEST(JointEmbed, GapIsTwiceTheLargestValue) {
  auto r = joint_embed_k(singleton("a", 1), singleton("b", 2));
  EXPECT_EQ(r.d.metric(0, 1), Rat(4));
  EXPECT_TRUE(validate_k(r.d).empty());
  EXPECT_TRUE(check_embedding_k(singleton("a", 1), r.d, r.wB));
  EXPECT_TRUE(check_embedding_k(singleton("b", 2), r.d, r.wC));
}

TEST(JointEmbed, EmptySideIsTheUnit) {
  Rng rng(1);
  auto b = random_structure_k(rng, 3, 2, 2, 4);
  auto r = joint_embed_k(StructureK{}, b);
  EXPECT_EQ(r.d, b);
  EXPECT_EQ(r.wC, EmbeddingWitnessK::identity(b));
}

TEST(JointEmbed, MissingValuesAreZero) {
  Rng rng(2);
  auto a = random_structure_k(rng, 1, 1, 2, 4);
  auto b = random_structure_k(rng, 2, 2, 2, 4, "y");
  b.nA = 2;
  for (auto k : b.slots())
    if (!b.pred.count(k)) b.pred[k] = random_table(rng, b.metric, k.n, 2, 4);
  auto r = joint_embed_k(a, b);
  EXPECT_EQ(r.d.nA, 2u);
  EXPECT_TRUE(validate_k(r.d).empty());
  // p_2^1 of the a-point comes from nowhere
  EXPECT_EQ(r.d.value({1, 2}, {r.wB.phi[0]}), Rat(0));
}

TEST(JointEmbed, RandomPairs) {
  Rng rng(3);
  for (int c = 0; c < 200; ++c) {
    auto a = random_structure_k(rng, rng.between(0, 3), 2, 8, 16, "a");
    auto b = random_structure_k(rng, rng.between(0, 3), 2, 8, 16, "b");
    auto r = joint_embed_k(a, b);
    ASSERT_TRUE(oracle::structure_ok(r.d));
    ASSERT_TRUE(check_embedding_k(a, r.d, r.wB));
    ASSERT_TRUE(check_embedding_k(b, r.d, r.wC));
  }
}

TEST(Amalgamate, ArityBoundAddsUp) {
  FinMetric ma({"a"}), mb({"a", "b"}), mc({"a", "c"});
  mb.set(0, 1, 1);
  mc.set(0, 1, 1);
  auto a = StructureK::zero(ma, 1), b = StructureK::zero(mb, 2), c = StructureK::zero(mc, 2);
  auto id = EmbeddingWitnessK::identity(a);
  auto r = amalgamate_k(b, c, a, id, id);
  EXPECT_EQ(r.d.nA, 3u);
  EXPECT_TRUE(validate_k(r.d).empty());
}

TEST(Amalgamate, PaddingWhenArityBoundExceedsPoints) {
  FinMetric ma({"a1", "a2"});
  ma.set(0, 1, 1);
  auto mb = ma, mc = ma;
  mb.add_point("b");
  mb.set(0, 2, 1);
  mb.set(1, 2, 1);
  mc.add_point("c");
  mc.set(0, 2, 2);
  mc.set(1, 2, 1);
  auto a = StructureK::zero(ma, 1), b = StructureK::zero(mb, 3), c = StructureK::zero(mc, 3);
  b.set({1, 2}, {2}, Rat(1, 2));
  auto id = EmbeddingWitnessK::identity(a);
  auto r = amalgamate_k(b, c, a, id, id);
  EXPECT_EQ(r.d.nA, 5u);
  EXPECT_EQ(r.d.size(), 5u);
  EXPECT_TRUE(validate_k(r.d).empty());
  EXPECT_TRUE(check_embedding_k(b, r.d, r.wB));
  EXPECT_TRUE(check_embedding_k(c, r.d, r.wC));
}

TEST(Amalgamate, SameStructureThreeTimes) {
  Rng rng(4);
  for (int c = 0; c < 30; ++c) {
    auto a = random_structure_k(rng, rng.between(1, 3), 2, 4, 8);
    auto id = EmbeddingWitnessK::identity(a);
    auto r = amalgamate_k(a, a, a, id, id);
    auto iso = find_isomorphism(a, r.d);
    ASSERT_TRUE(iso);
  }
}

TEST(Amalgamate, RejectsIncompatibleWitness) {
  FinMetric m({"a", "b"});
  m.set(0, 1, 1);
  auto a = StructureK::zero(FinMetric({"a"}), 1);
  auto b = StructureK::zero(m, 1);
  b.set({1, 1}, {0}, 1);
  auto id = EmbeddingWitnessK::identity(a);
  EXPECT_THROW(amalgamate_k(b, b, a, id, id), PreconditionError);
}

TEST(Amalgamate, RandomTriplesCommute) {
  Rng rng(5);
  for (int c = 0; c < 200; ++c) {
    auto t = cases::random_ap_triple(rng);
    ASSERT_TRUE(validate_k(t.a).empty());
    ASSERT_TRUE(check_embedding_k(t.a, t.b, t.wAB));
    ASSERT_TRUE(check_embedding_k(t.a, t.c, t.wAC));
    auto r = amalgamate_k(t.b, t.c, t.a, t.wAB, t.wAC);
    ASSERT_TRUE(oracle::structure_ok(r.d)) << "case " << c;
    ASSERT_TRUE(check_embedding_k(t.b, r.d, r.wB));
    ASSERT_TRUE(check_embedding_k(t.c, r.d, r.wC));
    if (t.a.size()) {
      auto viaB = compose(t.wAB, r.wB), viaC = compose(t.wAC, r.wC);
      ASSERT_EQ(viaB.phi, viaC.phi);
      ASSERT_EQ(viaB.pi, viaC.pi);
    }
  }
}
