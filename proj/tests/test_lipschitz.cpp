#include <gtest/gtest.h>

#include "cases.hpp"
#include "oracles.hpp"

using namespace urysohn;

namespace {

// q1..q4 with d(q1,q2) = 3, d(q1,q3) = 1, d(q2,q3) = 2, q4 an alias of q1.
PolishPresentation four_points() {
  return PolishPresentation::from_table({{0, 3, 1, 0}, {3, 0, 2, 3}, {1, 2, 0, 1}, {0, 3, 1, 0}});
}

StructureL pair(const Rat& d, std::size_t pa, std::size_t pb, const Rat& L = 1, const std::string& x = "a",
                const std::string& y = "b") {
  StructureL s;
  s.metric = FinMetric({x, y});
  s.metric.set(0, 1, d);
  s.p = {pa, pb};
  s.L = L;
  return s;
}

}  // namespace

TEST(ValidateL, Examples) {
  auto z = four_points();
  EXPECT_TRUE(validate_presentation(z).empty());
  auto v = validate_l(pair(2, 0, 1), z);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("3/1 > L*d(a,b) = 2/1"), std::string::npos);
  EXPECT_TRUE(validate_l(pair(4, 0, 1), z).empty());
  for (Rat L : {Rat(1, 8), Rat(1), Rat(5)}) EXPECT_TRUE(validate_l(pair(Rat(1, 16), 2, 2, L), z).empty());
  EXPECT_TRUE(validate_l(pair(Rat(1, 16), 0, 3), z).empty());
  EXPECT_THROW(validate_l(pair(1, 0, 9), z), PreconditionError);
}

TEST(ValidateL, PresentationTriangle) {
  auto bad = PolishPresentation::from_table({{0, 5, 1}, {5, 0, 1}, {1, 1, 0}});
  EXPECT_FALSE(validate_presentation(bad).empty());
}

TEST(AmalgamateL, SameStructure) {
  auto z = four_points();
  auto a = pair(4, 0, 1);
  auto r = amalgamate_l(a, a, a, {0, 1}, {0, 1}, z);
  EXPECT_EQ(r.d, a);
}

TEST(AmalgamateL, SingletonBase) {
  auto z = four_points();
  StructureL a;
  a.metric = FinMetric({"a"});
  a.p = {2};
  auto b = pair(2, 2, 1), c = pair(1, 2, 0, 1, "a", "c");
  auto r = amalgamate_l(b, c, a, {0}, {0}, z);
  EXPECT_EQ(r.d.metric(r.from_b[1], r.from_c[1]), Rat(3));
  EXPECT_TRUE(validate_l(r.d, z).empty());
  auto b2 = b;
  b2.L = 2;
  EXPECT_THROW(amalgamate_l(b2, c, a, {0}, {0}, z), PreconditionError);
}

TEST(AmalgamateL, RandomTriples) {
  Rng r(1);
  auto z = four_points();
  for (int c = 0; c < 200; ++c) {
    Rat L = r.rat(1, 8, 4);
    auto a = cases::random_l(r, z, L, static_cast<std::size_t>(r.between(1, 2)), 4, "a");
    auto extend = [&](const std::string& prefix) {
      StructureL s = a;
      for (long e = 0, n = r.between(0, 2); e < n; ++e) {
        auto eta = random_katetov(r, s.metric, 4, 12);
        auto idx = r.below(z.size());
        // push the new point out until it is L-Lipschitz against every point
        Rat need(1);
        for (std::size_t i = 0; i < s.p.size(); ++i) need = max(need, z.d(s.p[i], idx) / (L * eta[i]));
        auto p = s.metric.add_point(prefix + std::to_string(e));
        for (std::size_t i = 0; i < p; ++i) s.metric.set(i, p, eta[i] * need);
        s.p.push_back(idx);
        if (!validate_l(s, z).empty() || !validate_metric(s.metric).empty()) return std::optional<StructureL>{};
      }
      return std::optional<StructureL>{s};
    };
    auto b = extend("b"), cc = extend("c");
    if (!b || !cc) continue;
    std::vector<std::size_t> w(a.p.size());
    std::iota(w.begin(), w.end(), std::size_t{0});
    auto out = amalgamate_l(*b, *cc, a, w, w, z);
    ASSERT_TRUE(oracle::lipschitz_ok(out.d, z)) << "case " << c;
    ASSERT_TRUE(oracle::metric_ok(out.d.metric));
  }
}

// Two-point sides, distances and L with denominators dividing 8.
TEST(JointEmbedL, ExhaustiveTwoPointSides) {
  auto z = four_points();
  const std::vector<Rat> dists{Rat(1, 8), Rat(1, 4), Rat(3, 8), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)};
  std::size_t checked = 0;
  for (Rat L : {Rat(1, 8), Rat(1, 4), Rat(1, 2), Rat(1), Rat(2)})
    for (const auto& da : dists)
      for (const auto& db : dists)
        for (std::size_t code = 0; code < 256; ++code) {
          auto a = pair(da, code % 4, code / 4 % 4, L, "a1", "a2");
          auto b = pair(db, code / 16 % 4, code / 64, L, "b1", "b2");
          if (!oracle::lipschitz_ok(a, z) || !oracle::lipschitz_ok(b, z)) continue;
          auto out = joint_embed_l(a, b, z);
          ASSERT_TRUE(oracle::lipschitz_ok(out.d, z));
          ASSERT_TRUE(oracle::metric_ok(out.d.metric));
          ++checked;
        }
  EXPECT_GT(checked, 1000u);
}

// Gap 2m with m = max(diameters, L * d_Z): for L = 1/2 the cross pair of
// two singletons at d_Z = 3 gets distance 3, while the condition needs 6.
TEST(JointEmbedL, MultipliedConstantFailsForSmallL) {
  auto z = four_points();
  Rat L(1, 2);
  Rat m_multiplied = L * z.d(0, 1);
  Rat gap = gap_for(m_multiplied);
  EXPECT_GT(z.d(0, 1), L * gap);
  StructureL a, b;
  a.metric = FinMetric({"a"});
  b.metric = FinMetric({"b"});
  a.p = {0};
  b.p = {1};
  a.L = b.L = L;
  auto out = joint_embed_l(a, b, z);
  EXPECT_TRUE(validate_l(out.d, z).empty());
  EXPECT_EQ(out.d.metric(0, 1), Rat(12));
}

TEST(JointEmbedL, RandomPairs) {
  Rng r(2);
  for (int c = 0; c < 200; ++c) {
    auto z = random_polish(r, static_cast<std::size_t>(r.between(1, 5)), 8, 16);
    Rat L = r.rat(1, 16, 8);
    auto a = cases::random_l(r, z, L, static_cast<std::size_t>(r.between(0, 3)), 8, "a");
    auto b = cases::random_l(r, z, L, static_cast<std::size_t>(r.between(0, 3)), 8, "b");
    auto out = joint_embed_l(a, b, z);
    ASSERT_TRUE(oracle::lipschitz_ok(out.d, z)) << "case " << c;
    ASSERT_TRUE(oracle::metric_ok(out.d.metric));
  }
}
