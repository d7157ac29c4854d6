#include <gtest/gtest.h>

#include <unordered_set>

#include "urysohn/rational.hpp"

using urysohn::ParseError;
using urysohn::Rat;

TEST(Rational, NormalizesOnConstruction) {
  EXPECT_EQ(Rat(2, 4).str(), "1/2");
  EXPECT_EQ(Rat(-3, -6).str(), "1/2");
  EXPECT_EQ(Rat(3, -6).str(), "-1/2");
  EXPECT_EQ(Rat(0, 7).str(), "0/1");
  EXPECT_EQ(Rat(5).str(), "5/1");
}

TEST(Rational, ParseAcceptsOnlyNumOverDen) {
  EXPECT_EQ(Rat::parse("6/8"), Rat(3, 4));
  EXPECT_EQ(Rat::parse("0/5"), Rat(0));
  EXPECT_EQ(Rat::parse("-1/2", true), Rat(-1, 2));
  for (const char* bad : {"1", "1/0", "/2", "1/", "a/2", "1.5/2", "1/-2", "+1/2", "1 /2", ""})
    EXPECT_THROW(Rat::parse(bad), ParseError) << bad;
  EXPECT_THROW(Rat::parse("-1/2"), ParseError);
}

TEST(Rational, ParseHandlesLargeValues) {
  auto r = Rat::parse("123456789012345678901234567890/3");
  EXPECT_EQ(r.str(), "41152263004115226300411522630/1");
}

TEST(Rational, DyadicPowers) {
  EXPECT_EQ(Rat::dyadic(0), Rat(1));
  EXPECT_EQ(Rat::dyadic(3), Rat(1, 8));
  Rat x(1);
  for (unsigned k = 1; k <= 80; ++k) {
    x /= Rat(2);
    ASSERT_EQ(Rat::dyadic(k), x);
  }
}

TEST(Rational, ArithmeticIsExact) {
  Rat third(1, 3);
  EXPECT_EQ(third + third + third, Rat(1));
  EXPECT_EQ(Rat(1, 6) - Rat(1, 3), Rat(-1, 6));
  EXPECT_EQ(Rat(2, 3) * Rat(3, 4), Rat(1, 2));
  EXPECT_EQ(Rat(2, 3) / Rat(4, 3), Rat(1, 2));
  EXPECT_THROW(Rat(1) / Rat(0), urysohn::PreconditionError);
  EXPECT_THROW(Rat(1, 0), urysohn::PreconditionError);
}

TEST(Rational, OrderingAndHelpers) {
  EXPECT_LT(Rat(1, 3), Rat(1, 2));
  EXPECT_GT(Rat(-1, 3), Rat(-1, 2));
  EXPECT_EQ(abs(Rat(-2, 5)), Rat(2, 5));
  EXPECT_EQ(min(Rat(1, 2), Rat(1, 3)), Rat(1, 3));
  EXPECT_EQ(max(Rat(1, 2), Rat(1, 3)), Rat(1, 2));
  EXPECT_EQ(urysohn::monus(Rat(1), Rat(3)), Rat(0));
  EXPECT_EQ(urysohn::monus(Rat(3), Rat(1)), Rat(2));
  EXPECT_EQ(urysohn::clamp(Rat(5), Rat(0), Rat(2)), Rat(2));
  EXPECT_EQ(urysohn::clamp(Rat(-1), Rat(0), Rat(2)), Rat(0));
}

TEST(Rational, StrRoundTrips) {
  for (long n = -20; n <= 20; ++n)
    for (long d = 1; d <= 12; ++d) {
      Rat r(n, d);
      EXPECT_EQ(Rat::parse(r.str(), true), r);
    }
}

TEST(Rational, HashAgreesWithEquality) {
  std::unordered_set<Rat> s{Rat(1, 2), Rat(2, 4), Rat(3, 6), Rat(1, 3)};
  EXPECT_EQ(s.size(), 2u);
}
