#include <gtest/gtest.h>

#include <random>

#include "qtrace/qweyl_algebra.hpp"
#include "qtrace/trace_engine.hpp"
#include "support/fixtures.hpp"

namespace qtrace {
namespace {

constexpr double q = testing::kFlagshipQ;

AlgebraParams flagship(int k = 1) { return AlgebraParams::from_conjugation(q, testing::flagship_P(), k); }

double rel_diff(const AlgebraElement& a, const AlgebraElement& b) {
  return max_abs_diff(a, b) / std::max({1.0, max_abs_coeff(a), max_abs_coeff(b)});
}

TEST(Multiply, UVIsPAtQInverseZ) {
  const AlgebraParams p = flagship();
  const AlgebraElement uv = multiply(AlgebraElement::u(), AlgebraElement::v(), p);
  EXPECT_LT(max_abs_diff(uv, AlgebraElement::from_poly(scale_arg(p.P, 1.0 / q))), 1e-14);
  const AlgebraElement vu = multiply(AlgebraElement::v(), AlgebraElement::u(), p);
  EXPECT_LT(max_abs_diff(vu, AlgebraElement::from_poly(scale_arg(p.P, q))), 1e-14);
}

TEST(Multiply, ZUIsQSquaredUZ) {
  const AlgebraElement zu = multiply(AlgebraElement::Z(), AlgebraElement::u(), flagship());
  const AlgebraElement expected = AlgebraElement::ladder(1, LaurentPoly::monomial(1, q * q));
  EXPECT_LT(max_abs_diff(zu, expected), 1e-15);
}

TEST(Multiply, ConcreteAssociativity) {
  const AlgebraParams p = flagship();
  const auto u = AlgebraElement::u(), v = AlgebraElement::v();
  EXPECT_LT(max_abs_diff(multiply(multiply(u, v, p), v, p), multiply(u, multiply(v, v, p), p)), 1e-12);
}

TEST(Multiply, RandomAssociativity) {
  const AlgebraParams p = flagship();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    EXPECT_LT(rel_diff(multiply(multiply(a, b, p), c, p), multiply(a, multiply(b, c, p), p)), 1e-10) << t;
  }
}

TEST(ApplyG, TwistOfU) {
  const AlgebraParams p = AlgebraParams::with_twist(q, testing::flagship_P(), 2);
  const AlgebraElement expected = multiply(q * q * AlgebraElement::Z(-2), AlgebraElement::u(), p);
  EXPECT_LT(max_abs_diff(apply_g(AlgebraElement::u(), p), expected), 1e-14);
  EXPECT_EQ(max_abs_diff(apply_g(AlgebraElement::Z(5), p), AlgebraElement::Z(5)), 0.0);
}

TEST(ApplyG, IsAnAutomorphism) {
  std::mt19937_64 rng(12);
  for (int l : {-2, 1, 3}) {
    const AlgebraParams p = AlgebraParams::with_twist(q, testing::linear(3.0) * testing::linear(0.3), l);
    for (int t = 0; t < 30; ++t) {
      const auto a = random_element(rng), b = random_element(rng);
      EXPECT_LT(rel_diff(apply_g(multiply(a, b, p), p), multiply(apply_g(a, p), apply_g(b, p), p)), 1e-10);
    }
  }
}

TEST(ApplyRho, BasicValues) {
  const AlgebraParams p = flagship();
  EXPECT_EQ(max_abs_diff(apply_rho(AlgebraElement::Z(), p), AlgebraElement::Z(-1)), 0.0);
  const AlgebraElement i1 = AlgebraElement::scalar({0.0, 1.0});
  EXPECT_EQ(max_abs_diff(apply_rho(i1, p), AlgebraElement::scalar({0.0, -1.0})), 0.0);
}

TEST(ApplyRho, SquareIsTwistByTwoK) {
  for (int k : {-1, 0, 1, 2}) {
    const AlgebraParams p = flagship(k);
    EXPECT_EQ(p.l, 2 * k);
    const auto u = AlgebraElement::u();
    EXPECT_LT(rel_diff(apply_rho(apply_rho(u, p), p), apply_g(u, p)), 1e-12);
    std::mt19937_64 rng(13 + k);
    for (int t = 0; t < 30; ++t) {
      const auto a = random_element(rng);
      EXPECT_LT(rel_diff(apply_rho(apply_rho(a, p), p), apply_g(a, p)), 1e-10);
    }
  }
}

TEST(ApplyRho, IsMultiplicative) {
  const AlgebraParams p = flagship();
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_element(rng), b = random_element(rng);
    EXPECT_LT(rel_diff(apply_rho(multiply(a, b, p), p), multiply(apply_rho(a, p), apply_rho(b, p), p)), 1e-10);
  }
}

TEST(ApplyRho, RejectsNonSelfConjugateP) {
  AlgebraParams p;
  p.q = q;
  p.P = testing::linear(2.0);
  p.k = 1;
  p.l = 2;
  EXPECT_THROW(apply_rho(AlgebraElement::u(), p), std::invalid_argument);
  EXPECT_THROW(AlgebraParams::from_conjugation(q, testing::linear(2.0), 1), std::invalid_argument);
}

TEST(DegreeZeroPart, Examples) {
  const AlgebraParams p = flagship();
  EXPECT_LT(max_abs_diff(degree_zero_part(multiply(AlgebraElement::u(), AlgebraElement::v(), p)), scale_arg(p.P, 1.0 / q)),
            1e-14);
  EXPECT_TRUE(degree_zero_part(AlgebraElement::ladder(1, testing::flagship_P())).is_zero());
  const LaurentPoly d = degree_zero_part(7.0 * AlgebraElement::Z(-3));
  EXPECT_EQ(d.coeff(-3), cplx(7.0));
  EXPECT_EQ(d.coeffs().size(), 1u);
}

TEST(Relations, TwistPreservesRelationsForAnyP) {
  for (int l : {-3, 0, 2, 5}) {
    EXPECT_LT(check_relations_preserved(AlgebraMap::Twist, AlgebraParams::with_twist(q, testing::linear(3.0), l))
                  .max_residual(),
              1e-12);
    EXPECT_LT(check_relations_preserved(AlgebraMap::Twist, flagship()).max_residual(), 1e-12);
  }
}

TEST(Relations, ConjugationNeedsSelfConjugateP) {
  EXPECT_LT(check_relations_preserved(AlgebraMap::Conjugation, flagship()).max_residual(), 1e-12);
  AlgebraParams bad;
  bad.q = q;
  bad.P = testing::linear(2.0);
  bad.k = 1;
  bad.l = 2;
  const RelationReport r = check_relations_preserved(AlgebraMap::Conjugation, bad);
  EXPECT_GT(r.u_v, 1e-3);
}

TEST(ValidateParams, RejectsBadInput) {
  EXPECT_THROW(validate_params(AlgebraParams::with_twist(1.5, testing::flagship_P(), 0)), std::invalid_argument);
  EXPECT_THROW(validate_params(AlgebraParams::with_twist(0.5, LaurentPoly(), 0)), std::invalid_argument);
  EXPECT_THROW(validate_params(AlgebraParams::with_twist(0.5, testing::linear(2.0), 0)), std::invalid_argument);
  EXPECT_NO_THROW(validate_params(flagship()));
}

}  // namespace
}  // namespace qtrace
