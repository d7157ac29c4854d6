#include <gtest/gtest.h>

#include "oracles.hpp"
#include "urysohn/metric.hpp"
#include "urysohn/random.hpp"

using namespace urysohn;

namespace {

FinMetric space(std::vector<std::string> ids, std::vector<std::tuple<int, int, Rat>> d) {
  FinMetric m(std::move(ids));
  for (auto& [i, j, v] : d) m.set(i, j, v);
  return m;
}

}  // namespace

TEST(ValidateMetric, TriangleViolationNamesTheTriple) {
  auto m = space({"x", "y", "z"}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  auto v = validate_metric(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, MetricViolation::Kind::Triangle);
  EXPECT_EQ(v[0].points, (std::vector<std::string>{"x", "z", "y"}));
}

TEST(ValidateMetric, SinglePointIsValid) { EXPECT_TRUE(validate_metric(FinMetric({"x"})).empty()); }

TEST(ValidateMetric, ZeroDistanceBetweenDistinctPoints) {
  auto v = validate_metric(space({"x", "y"}, {{0, 1, 0}}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_STREQ(kind_name(v[0].kind), "identity of indiscernibles");
}

TEST(ValidateMetric, AsymmetryIsReported) {
  FinMetric m({"x", "y"});
  m.set(0, 1, 1);
  m.set_directed(1, 0, 2);
  auto v = validate_metric(m);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, MetricViolation::Kind::Symmetry);
}

TEST(ValidateMetric, MissingEntryIsStructural) {
  FinMetric m({"x", "y"});
  EXPECT_THROW(validate_metric(m), StructuralError);
}

TEST(ValidateMetric, AgreesWithReferenceOnRandomTables) {
  Rng r(11);
  for (int c = 0; c < 300; ++c) {
    FinMetric m;
    auto n = r.between(1, 5);
    for (long i = 0; i < n; ++i) m.add_point("p" + std::to_string(i));
    for (long i = 0; i < n; ++i)
      for (long j = i + 1; j < n; ++j) m.set(i, j, r.rat(0, 6, 2));
    EXPECT_EQ(validate_metric(m).empty(), oracle::metric_ok(m));
  }
}

TEST(PathAmalgam, SinglePathForcesTheSum) {
  auto a = FinMetric({"a"});
  auto b = space({"a", "b"}, {{0, 1, 1}});
  auto c = space({"a", "c"}, {{0, 1, 2}});
  auto r = path_amalgam_metric(b, c, a, {0}, {0});
  EXPECT_EQ(r.d(r.from_b[1], r.from_c[1]), Rat(3));
}

TEST(PathAmalgam, MinimumOverCommonPoints) {
  auto a = space({"a1", "a2"}, {{0, 1, 2}});
  auto b = space({"a1", "a2", "b"}, {{0, 1, 2}, {2, 0, 1}, {2, 1, 3}});
  auto c = space({"a1", "a2", "c"}, {{0, 1, 2}, {2, 0, 5}, {2, 1, 3}});
  auto r = path_amalgam_metric(b, c, a, {0, 1}, {0, 1});
  EXPECT_EQ(r.d(r.from_b[2], r.from_c[2]), Rat(6));
  EXPECT_TRUE(validate_metric(r.d).empty());
}

TEST(PathAmalgam, NoNewPointsGivesA) {
  auto a = space({"a1", "a2"}, {{0, 1, 2}});
  auto r = path_amalgam_metric(a, a, a, {0, 1}, {0, 1});
  EXPECT_EQ(r.d, a);
}

TEST(PathAmalgam, Errors) {
  auto a = space({"a1", "a2"}, {{0, 1, 2}});
  auto b = space({"a1", "a2"}, {{0, 1, 3}});
  EXPECT_THROW(path_amalgam_metric(b, a, a, {0, 1}, {0, 1}), PreconditionError);
  FinMetric empty;
  EXPECT_THROW(path_amalgam_metric(FinMetric({"b"}), FinMetric({"c"}), empty, {}, {}), PreconditionError);
}

TEST(PathAmalgam, RandomTriplesGiveMetrics) {
  Rng r(5);
  for (int c = 0; c < 200; ++c) {
    auto a = random_metric(r, r.between(1, 3), 4, 8, "a");
    FinMetric b = a, cc = a;
    for (int e = 0, n = static_cast<int>(r.between(0, 2)); e < n; ++e) {
      auto eta = random_katetov(r, b, 4, 8);
      auto p = b.add_point("b" + std::to_string(e));
      for (std::size_t i = 0; i < p; ++i) b.set(i, p, eta[i]);
    }
    for (int e = 0, n = static_cast<int>(r.between(0, 2)); e < n; ++e) {
      auto eta = random_katetov(r, cc, 4, 8);
      auto p = cc.add_point("c" + std::to_string(e));
      for (std::size_t i = 0; i < p; ++i) cc.set(i, p, eta[i]);
    }
    std::vector<std::size_t> w(a.size());
    std::iota(w.begin(), w.end(), std::size_t{0});
    auto out = path_amalgam_metric(b, cc, a, w, w);
    ASSERT_TRUE(oracle::metric_ok(out.d)) << "case " << c;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (i != j) {
          ASSERT_EQ(out.d(out.from_b[i], out.from_b[j]), b(i, j));
        }
    for (std::size_t i = 0; i < cc.size(); ++i)
      for (std::size_t j = 0; j < cc.size(); ++j)
        if (i != j) {
          ASSERT_EQ(out.d(out.from_c[i], out.from_c[j]), cc(i, j));
        }
  }
}

TEST(JepGap, Singletons) {
  auto r = jep_gap_metric(FinMetric({"a"}), FinMetric({"b"}), 6);
  EXPECT_EQ(r.d.size(), 2u);
  EXPECT_EQ(r.d(0, 1), Rat(6));
}

TEST(JepGap, EmptySide) {
  auto b = space({"b1", "b2"}, {{0, 1, 1}});
  EXPECT_EQ(jep_gap_metric(FinMetric{}, b, 0).d, b);
}

TEST(JepGap, DiameterBound) {
  auto a = space({"a1", "a2"}, {{0, 1, 2}});
  auto b = space({"b1", "b2"}, {{0, 1, 3}});
  auto r = jep_gap_metric(a, b, Rat(6));
  EXPECT_TRUE(validate_metric(r.d).empty());
  EXPECT_THROW(jep_gap_metric(a, b, Rat(1)), PreconditionError);
  EXPECT_THROW(jep_gap_metric(a, b, Rat(0)), PreconditionError);
  EXPECT_EQ(gap_for(Rat(0)), Rat(1));
  EXPECT_EQ(gap_for(Rat(3, 2)), Rat(3));
}

TEST(OnePointFeasible, Examples) {
  auto m = space({"v1", "v2"}, {{0, 1, 2}});
  EXPECT_TRUE(one_point_feasible(m, {{{0, 1}, {1, 1}}}).ok);
  auto bad = one_point_feasible(m, {{{0, 1}, {1, 5}}});
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.violation.find("|eta(v1) - eta(v2)| = 4/1 > d = 2/1"), std::string::npos);
  EXPECT_TRUE(one_point_feasible(m, {{{0, 3}, {1, 3}}}).ok);
  EXPECT_THROW(one_point_feasible(m, {{{0, 0}, {1, 2}}}), PreconditionError);
}

// Every base of at most 3 points with values in {1/4, ..., 1}; the extended
// table is checked directly.
TEST(OnePointFeasible, ExhaustiveSmall) {
  const std::vector<Rat> vals{Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4), Rat(1)};
  const std::size_t V = vals.size();
  for (std::size_t n = 0; n <= 3; ++n) {
    const std::size_t pairs = n * (n - (n ? 1 : 0)) / 2;
    std::size_t metrics = 1, etas = 1;
    for (std::size_t i = 0; i < pairs; ++i) metrics *= V;
    for (std::size_t i = 0; i < n; ++i) etas *= V;
    for (std::size_t mc = 0; mc < metrics; ++mc) {
      FinMetric m;
      for (std::size_t i = 0; i < n; ++i) m.add_point("p" + std::to_string(i));
      std::size_t code = mc;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          m.set(i, j, vals[code % V]);
          code /= V;
        }
      if (!oracle::metric_ok(m)) continue;
      for (std::size_t ec = 0; ec < etas; ++ec) {
        OnePointSpec spec;
        FinMetric ext = m;
        auto g = ext.add_point("new");
        std::size_t e = ec;
        for (std::size_t i = 0; i < n; ++i) {
          spec.eta.emplace_back(i, vals[e % V]);
          ext.set(i, g, vals[e % V]);
          e /= V;
        }
        ASSERT_EQ(one_point_feasible(m, spec).ok, oracle::metric_ok(ext));
      }
    }
  }
}
