#include "sosrate/rational.h"

#include <gtest/gtest.h>

namespace sosrate {
namespace {

TEST(ParseRational, Forms) {
  EXPECT_EQ(ParseRational("3/4"), Rational(3, 4));
  EXPECT_EQ(ParseRational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(ParseRational("7"), Rational(7));
  EXPECT_EQ(ParseRational("0.19"), Rational(19, 100));
  EXPECT_EQ(ParseRational("-1.5e-3"), Rational(-3, 2000));
  EXPECT_EQ(ParseRational("2e2"), Rational(200));
}

TEST(ParseRational, Rejects) {
  EXPECT_THROW(ParseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(ParseRational("abc"), std::invalid_argument);
  EXPECT_THROW(ParseRational(""), std::invalid_argument);
  EXPECT_THROW(ParseRational("1/2/3"), std::invalid_argument);
}

TEST(RationalFormat, RoundTrip) {
  for (const Rational& q : {Rational(81, 121), Rational(-5), Rational(0), Rational(1, 3)})
    EXPECT_EQ(ParseRational(ToString(q)), q);
  EXPECT_EQ(ToString(Fraction(4, 2)), "2");
  EXPECT_EQ(ToString(Rational(-1, 3)), "-1/3");
  EXPECT_DOUBLE_EQ(ToDouble(Rational(1, 4)), 0.25);
}

TEST(Fraction, Canonical) {
  EXPECT_EQ(Fraction(4, 2), Rational(2));
  EXPECT_EQ(Fraction(-3, -6), Rational(1, 2));
  EXPECT_EQ(Fraction(0, 5), Rational(0));
  EXPECT_THROW(Fraction(1, 0), std::invalid_argument);
}

TEST(ExactSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(ExactSqrt(Rational(9, 4)), Rational(3, 2));
  EXPECT_EQ(ExactSqrt(Rational(0)), Rational(0));
  EXPECT_FALSE(ExactSqrt(Rational(2)).has_value());
  EXPECT_FALSE(ExactSqrt(Rational(-4)).has_value());
  EXPECT_EQ(Abs(Rational(-2, 3)), Rational(2, 3));
}

TEST(RationalMatrix, Algebra) {
  RationalMatrix a(2);
  a(0, 0) = 1;
  a(0, 1) = Rational(1, 2);
  a(1, 0) = Rational(1, 2);
  a(1, 1) = 3;
  EXPECT_TRUE(a.IsSymmetric());
  EXPECT_EQ(a.Trace(), Rational(4));
  const RationalMatrix i = RationalMatrix::Identity(2);
  EXPECT_EQ(a * i, a);
  EXPECT_TRUE((a - a).IsZero());
  EXPECT_EQ((a + a), a.Scaled(2));
  a(0, 1) = 0;
  EXPECT_FALSE(a.IsSymmetric());
}

}  // namespace
}  // namespace sosrate
