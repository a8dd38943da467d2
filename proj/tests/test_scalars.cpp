#include <gtest/gtest.h>

#include <random>

#include "qgcb/errors.hpp"
#include "qgcb/scalars.hpp"

using namespace qgcb;

namespace {

LaurentPoly lp(std::vector<std::pair<int, long>> t) {
  std::vector<LaurentPoly::Term> terms;
  for (auto [e, c] : t) terms.emplace_back(e, Integer(c));
  return LaurentPoly::from_terms(terms);
}

LaurentPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(0, 4), ex(-5, 5), co(-4, 4);
  std::vector<LaurentPoly::Term> t;
  for (int k = len(rng); k > 0; --k) t.emplace_back(ex(rng), Integer(co(rng)));
  return LaurentPoly::from_terms(t);
}

}  // namespace

TEST(Scalars, BarNegatesExponents) {
  EXPECT_EQ(lp({{2, 1}, {-1, -3}}).bar(), lp({{-2, 1}, {1, -3}}));
  EXPECT_EQ(LaurentPoly(1).bar(), LaurentPoly(1));
  EXPECT_EQ(quantum_integer(2, 1).bar(), quantum_integer(2, 1));
}

TEST(Scalars, NoZeroCoefficientsStored) {
  auto p = lp({{1, 2}, {1, -2}, {0, 0}});
  EXPECT_TRUE(p.is_zero());
  EXPECT_TRUE(p.terms().empty());
  auto r = lp({{1, 1}}) - lp({{1, 1}});
  EXPECT_TRUE(r.terms().empty());
}

TEST(Scalars, QuantumIntegers) {
  EXPECT_EQ(quantum_integer(2, 1), lp({{1, 1}, {-1, 1}}));
  EXPECT_EQ(quantum_integer(1, 3), LaurentPoly(1));
  EXPECT_EQ(quantum_integer(3, 2), lp({{4, 1}, {0, 1}, {-4, 1}}));
  EXPECT_EQ(quantum_integer(0, 1), LaurentPoly(0));
  EXPECT_THROW(quantum_integer(-1, 1), DomainError);
  EXPECT_EQ(signed_quantum_integer(-2, 1), -quantum_integer(2, 1));
}

TEST(Scalars, QuantumBinomials) {
  EXPECT_EQ(quantum_binomial(2, 1, 1), quantum_integer(2, 1));
  for (int m = 0; m < 6; ++m) EXPECT_EQ(quantum_binomial(m, 0, 2), LaurentPoly(1));
  EXPECT_EQ(quantum_binomial(4, 2, 1), lp({{4, 1}, {2, 1}, {0, 2}, {-2, 1}, {-4, 1}}));
  EXPECT_THROW(quantum_binomial(2, 3, 1), DomainError);
  EXPECT_THROW(quantum_binomial(2, -1, 1), DomainError);
}

TEST(Scalars, BinomialsAreBarInvariantAndSpecialise) {
  for (int d = 1; d <= 3; ++d)
    for (int m = 0; m <= 8; ++m) {
      long classical = 1;
      for (int t = 0; t <= m; ++t) {
        auto b = quantum_binomial(m, t, d);
        EXPECT_TRUE(b.is_bar_invariant());
        EXPECT_EQ(b.eval_at_one(), Integer(classical));
        classical = classical * (m - t) / (t + 1);
      }
    }
}

TEST(Scalars, BarSplit) {
  EXPECT_EQ(bar_split(LaurentPoly(0)), LaurentPoly(0));
  EXPECT_EQ(bar_split(lp({{1, 1}, {-1, -1}})), lp({{-1, -1}}));
  EXPECT_EQ(bar_split(lp({{3, 1}, {1, 2}, {-1, -2}, {-3, -1}})), lp({{-1, -2}, {-3, -1}}));
  EXPECT_THROW(bar_split(lp({{1, 1}})), InvariantViolation);
  EXPECT_THROW(bar_split(LaurentPoly(1)), InvariantViolation);
}

TEST(Scalars, RatFuncArithmetic) {
  RatFunc one_minus(lp({{0, 1}, {-2, -1}}));
  EXPECT_EQ(RatFunc(LaurentPoly(1), one_minus.num()) * one_minus, RatFunc(1));
  LaurentPoly qq = lp({{1, 1}, {-1, -1}});
  EXPECT_EQ(RatFunc(LaurentPoly::q(1), qq) + RatFunc(-LaurentPoly::q(-1), qq), RatFunc(1));
  RatFunc a(LaurentPoly(1), qq), b(LaurentPoly(1), lp({{2, 1}, {0, -1}}));
  EXPECT_EQ(a / b, RatFunc(LaurentPoly::q(1)));
  EXPECT_THROW(a / RatFunc(0), DomainError);
}

TEST(Scalars, RatFuncCanonicalForm) {
  RatFunc x(lp({{2, 2}, {0, -2}}), lp({{3, 4}, {1, -4}}));
  // (2q^2 - 2) / (4q^3 - 4q) = q^-1 / 2
  EXPECT_FALSE(x.is_laurent());
  EXPECT_EQ(x, RatFunc(LaurentPoly::q(-1), LaurentPoly(2)));
  EXPECT_EQ(x * RatFunc(2), RatFunc(LaurentPoly::q(-1)));
  EXPECT_TRUE((x * RatFunc(2)).is_laurent());
  RatFunc y(lp({{0, 1}}), lp({{0, -1}, {2, -1}}));
  EXPECT_EQ(y.den().min_exp(), 0);
  EXPECT_GT(sgn(y.den().leading_coeff()), 0);
}

TEST(Scalars, ExpandAtInfinity) {
  // 1/(1 - q^-2) = 1 + q^-2 + q^-4 + ...
  RatFunc x(LaurentPoly(1), lp({{0, 1}, {-2, -1}}));
  auto s = x.expand_at_infinity(-6);
  ASSERT_EQ(s.size(), 4u);
  for (int e : {0, -2, -4, -6}) EXPECT_EQ(s.at(e), Rational(1));
}

TEST(ScalarsProperty, RingAndInvolutionLaws) {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ((a * b).bar(), a.bar() * b.bar());
    EXPECT_EQ((a + b).bar(), a.bar() + b.bar());
    EXPECT_EQ(a.bar().bar(), a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) {
      auto quotient = divide_exact(a * b, b);
      ASSERT_TRUE(quotient.has_value());
      EXPECT_EQ(*quotient, a);
    }
    auto gamma = a - a.bar();
    auto split = bar_split(gamma);
    EXPECT_EQ(split - split.bar(), gamma);
    EXPECT_TRUE(split.is_zero() || split.max_exp() < 0);
  }
}

TEST(ScalarsProperty, FieldLawsAndCanonicalEquality) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    auto p1 = random_poly(rng), p2 = random_poly(rng), p3 = random_poly(rng), p4 = random_poly(rng);
    if (p2.is_zero() || p4.is_zero()) continue;
    RatFunc a(p1, p2), b(p3, p4);
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a - b).is_zero(), a == b);
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    EXPECT_EQ(a.bar().bar(), a);
    EXPECT_EQ((a * b).bar(), a.bar() * b.bar());
    // Laurent embedding is a ring map.
    EXPECT_EQ(RatFunc(p1) * RatFunc(p3), RatFunc(p1 * p3));
    EXPECT_EQ(RatFunc(p1) + RatFunc(p3), RatFunc(p1 + p3));
  }
}
