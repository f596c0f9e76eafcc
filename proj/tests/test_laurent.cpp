#include <gtest/gtest.h>

#include <random>

#include "knotlab/laurent.hpp"

using knotlab::LaurentPoly;
using knotlab::Variable;

namespace {

LaurentPoly random_poly(std::mt19937 &rng, Variable v = Variable::A) {
  std::uniform_int_distribution<int> terms(0, 5), exp(-8, 8), coef(-5, 5);
  LaurentPoly p(v);
  for (int i = terms(rng); i > 0; --i)
    p.add_term(exp(rng), coef(rng));
  return p;
}

LaurentPoly A(int e, std::int64_t c = 1) { return LaurentPoly::monomial(c, e); }

} // namespace

TEST(Laurent, ZeroTermsAreDropped) {
  LaurentPoly p = A(3) - A(3);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.to_string(), "0");
  EXPECT_TRUE(LaurentPoly::monomial(0, 5).is_zero());
}

TEST(Laurent, RingAxiomsOnRandomPolynomials) {
  std::mt19937 rng(20240611);
  const auto one = LaurentPoly::constant(1), zero = LaurentPoly();
  for (int i = 0; i < 300; ++i) {
    auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * one, a);
    EXPECT_EQ(a + zero, a);
    EXPECT_TRUE((a + (-a)).is_zero());
    EXPECT_EQ(a - b, a + (-b));
  }
}

TEST(Laurent, PowMatchesRepeatedProduct) {
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) {
    auto a = random_poly(rng);
    LaurentPoly r = LaurentPoly::constant(1);
    for (unsigned k = 0; k < 5; ++k) {
      EXPECT_EQ(a.pow(k), r);
      r *= a;
    }
  }
}

TEST(Laurent, ShiftScaleAndInversion) {
  auto p = A(2, 3) + A(-1, -2);
  EXPECT_EQ(p.shifted(3), A(5, 3) + A(2, -2));
  EXPECT_EQ(p.scaled(-2), A(2, -6) + A(-1, 4));
  EXPECT_TRUE(p.scaled(0).is_zero());
  EXPECT_EQ(p.inverted_variable(), A(-2, 3) + A(1, -2));
  EXPECT_EQ(p.inverted_variable().inverted_variable(), p);
}

TEST(Laurent, SubstitutionSendsAToQuarterPowersOfT) {
  // -A^5 - A^-3 + A^-7 times (-A^3)^-3 is the right trefoil's Jones in A.
  auto bracket = A(5, -1) + A(-3, -1) + A(-7);
  auto factor = A(-9, -1);
  auto v = (factor * bracket).substitute_a_to_t();
  EXPECT_EQ(v.variable(), Variable::t);
  EXPECT_EQ(v.to_string(), "-t^4 + t^3 + t");
  EXPECT_EQ(v.coefficient(16), -1);
  EXPECT_EQ(v.coefficient(12), 1);
  EXPECT_EQ(v.coefficient(4), 1);
  EXPECT_THROW(v.substitute_a_to_t(), std::logic_error);
}

TEST(Laurent, TextForms) {
  EXPECT_EQ((A(5, -1) + A(-3, -1) + A(-7)).to_string(), "-A^5 - A^-3 + A^-7");
  EXPECT_EQ((A(1, 2) + LaurentPoly::constant(-3)).to_string(), "2A - 3");
  auto halves = LaurentPoly::monomial(-1, 10, Variable::t) + LaurentPoly::monomial(-1, 2, Variable::t);
  EXPECT_EQ(halves.to_string(), "-t^(5/2) - t^(1/2)");
  EXPECT_EQ(LaurentPoly::monomial(1, -3, Variable::t).to_string(), "t^(-3/4)");
  EXPECT_EQ(LaurentPoly::monomial(1, -4, Variable::t).to_string(), "t^-1");
}

TEST(Laurent, MixedVariablesAreRejected) {
  EXPECT_THROW(A(1) + LaurentPoly::monomial(1, 1, Variable::t), std::logic_error);
  EXPECT_THROW(A(1) * LaurentPoly::monomial(1, 1, Variable::t), std::logic_error);
}

TEST(Laurent, CoefficientOverflowIsReported) {
  auto big = LaurentPoly::constant(std::int64_t{1} << 62);
  EXPECT_THROW(big.scaled(4), std::overflow_error);
  EXPECT_THROW(big + big, std::overflow_error);
}
