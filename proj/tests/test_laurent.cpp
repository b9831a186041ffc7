#include <gtest/gtest.h>

#include <random>

#include <Eigen/Dense>

#include "qtrace/laurent.hpp"
#include "support/fixtures.hpp"

namespace qtrace {
namespace {

using testing::linear;

LaurentPoly random_poly(std::mt19937_64& rng, int lo, int hi) {
  std::map<int, cplx> c;
  for (int i = lo; i <= hi; ++i) c[i] = {2 * testing::uniform(rng) - 1, 2 * testing::uniform(rng) - 1};
  return LaurentPoly(c);
}

BilateralSeries random_series(std::mt19937_64& rng, Window w) {
  std::vector<cplx> v;
  for (int i = w.lo; i <= w.hi; ++i) v.emplace_back(2 * testing::uniform(rng) - 1, 2 * testing::uniform(rng) - 1);
  return BilateralSeries(w, v);
}

double interior_max(const BilateralSeries& s, const Window& w) { return s.max_abs(w); }

TEST(LaurentPoly, CanonicalFormDropsNegligibleCoefficients) {
  const LaurentPoly p(std::map<int, cplx>{{-3, 1e-20}, {0, 1.0}, {2, 0.5}});
  EXPECT_EQ(p.coeffs().size(), 2u);
  EXPECT_EQ(p.min_exp(), 0);
  EXPECT_EQ(p.max_exp(), 2);
  EXPECT_TRUE(LaurentPoly(std::map<int, cplx>{{1, 0.0}}).is_zero());
}

TEST(LaurentPoly, ProductMatchesPointwiseEvaluation) {
  std::mt19937_64 rng(1);
  const LaurentPoly a = random_poly(rng, -2, 3), b = random_poly(rng, -4, 1);
  const cplx z{0.7, -0.4};
  EXPECT_LT(std::abs((a * b)(z) - a(z) * b(z)), 1e-12);
}

TEST(Ct, ReadsConstantTerm) {
  EXPECT_EQ(ct(LaurentPoly(std::map<int, cplx>{{-2, 3.0}, {0, 5.0}, {1, 2.0}})), cplx(5.0));
  EXPECT_EQ(ct(LaurentPoly()), cplx(0.0));
}

TEST(Ct, PolyTimesRightInverseIsOne) {
  const LaurentPoly p = linear(2.0);
  const BilateralSeries prod = multiply(p, right_inverse(p, {0, 64}));
  EXPECT_NEAR(std::abs(ct(prod) - 1.0), 0.0, 1e-10);
}

TEST(ScaleArg, ScalesCoefficientsByPowers) {
  const LaurentPoly p(std::map<int, cplx>{{-1, 1.0}, {1, 1.0}});
  const LaurentPoly s = scale_arg(p, 0.5);
  EXPECT_NEAR(std::abs(s.coeff(1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coeff(-1) - 2.0), 0.0, 1e-15);
  EXPECT_EQ(max_abs_diff(scale_arg(p, 1.0), p), 0.0);
}

TEST(ScaleArg, ConstantTermIsInvariant) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const BilateralSeries s = random_series(rng, {-8, 8});
    const cplx c = std::polar(0.3 + 2 * testing::uniform(rng), 6.0 * testing::uniform(rng));
    EXPECT_EQ(ct(scale_arg(s, c)), ct(s));
  }
}

TEST(ConjInvol, FlagshipPolynomialIsSelfConjugate) {
  const LaurentPoly P = testing::flagship_P();
  EXPECT_EQ(max_abs_diff(conj_invol(P), P), 0.0);
  EXPECT_TRUE(is_self_conjugate(P));
}

TEST(ConjInvol, MapsIzToMinusIOverZ) {
  const LaurentPoly p = LaurentPoly::monomial(1, {0.0, 1.0});
  const LaurentPoly c = conj_invol(p);
  EXPECT_EQ(c.coeffs().size(), 1u);
  EXPECT_EQ(c.coeff(-1), cplx(0.0, -1.0));
}

TEST(ConjInvol, IsAnInvolution) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const LaurentPoly p = random_poly(rng, -3, 4);
    EXPECT_EQ(max_abs_diff(conj_invol(conj_invol(p)), p), 0.0);
  }
}

TEST(Roots, FlagshipQuadratic) {
  const RootData rd = roots(testing::flagship_P());
  ASSERT_EQ(rd.roots.size(), 2u);
  std::vector<double> r{rd.roots[0].location.real(), rd.roots[1].location.real()};
  std::sort(r.begin(), r.end());
  EXPECT_NEAR(r[0], 1.0 / 1.2, 1e-12);
  EXPECT_NEAR(r[1], 1.2, 1e-12);
  EXPECT_EQ(rd.count(), 2);
}

TEST(Roots, LinearAndDoubleRoot) {
  const RootData a = roots(linear(2.0));
  ASSERT_EQ(a.roots.size(), 1u);
  EXPECT_NEAR(std::abs(a.roots[0].location - 2.0), 0.0, 1e-13);

  const LaurentPoly sq = linear(2.0) * linear(2.0) * LaurentPoly::monomial(-1);
  const RootData b = roots(sq, 1e-6);
  ASSERT_EQ(b.roots.size(), 1u);
  EXPECT_EQ(b.roots[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(b.roots[0].location - 2.0), 0.0, 1e-6);
}

TEST(Roots, ProductFormReproducesPolynomial) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const LaurentPoly p = random_poly(rng, -2, 3);
    const RootData rd = roots(p);
    EXPECT_EQ(rd.count(), p.spread());
    for (int s = 0; s < 16; ++s) {
      const cplx z = std::polar(1.0, 2 * std::numbers::pi * testing::uniform(rng));
      EXPECT_LT(std::abs(rd.evaluate(z) - p(z)), 1e-8 * std::max(1.0, std::abs(p(z))));
    }
  }
}

TEST(Roots, RejectsZeroPolynomial) { EXPECT_THROW(roots(LaurentPoly()), std::invalid_argument); }

TEST(Inverses, GeometricSeries) {
  const BilateralSeries r = right_inverse(linear(2.0), {0, 32});
  for (int i = 0; i <= 32; ++i) EXPECT_NEAR(std::abs(r[i] + 0.5 * std::pow(0.5, i)), 0.0, 1e-15);
  const BilateralSeries l = left_inverse(linear(2.0), {-32, 0});
  EXPECT_NEAR(std::abs(l[0]), 0.0, 1e-15);
  for (int i = 1; i <= 32; ++i) EXPECT_NEAR(std::abs(l[-i] - std::pow(2.0, i - 1)), 0.0, 1e-9 * std::pow(2.0, i));

  const BilateralSeries one = right_inverse(LaurentPoly::constant(1.0), {0, 8});
  EXPECT_EQ(one[0], cplx(1.0));
  EXPECT_EQ(one.max_abs(Window{1, 8}), 0.0);
  EXPECT_EQ(left_inverse(LaurentPoly::constant(1.0), {-8, 0})[0], cplx(1.0));
}

TEST(Inverses, InteriorResidualForRandomCubics) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const LaurentPoly p = random_poly(rng, 0, 3);
    const Window w{-40, 40};
    for (const BilateralSeries& inv : {right_inverse(p, w), left_inverse(p, w)}) {
      BilateralSeries prod = multiply(p, inv);
      const Window in = interior(w, p);
      EXPECT_LT(std::abs(ct(prod) - 1.0), 1e-10);
      prod.at(0) -= 1.0;
      // Relative to the largest coefficient of the inverse: the series may grow away from 0.
      EXPECT_LT(interior_max(prod, in), 1e-12 * std::max(1.0, inv.max_abs()));
    }
  }
}

TEST(KernelBasis, SingleRootGivesGeometricSeries) {
  const auto basis = kernel_basis(roots(linear(2.0)), {-20, 20});
  ASSERT_EQ(basis.size(), 1u);
  for (int i = -20; i <= 20; ++i) EXPECT_NEAR(std::abs(basis[0][i] - std::pow(2.0, -i)), 0.0, 1e-9 * std::pow(2.0, -i));
}

TEST(KernelBasis, TwoRootsAnnihilatedOnInterior) {
  const LaurentPoly p = linear(2.0) * linear(3.0) * LaurentPoly::monomial(-1);
  const Window w{-32, 32};
  const auto basis = kernel_basis(roots(p), w);
  ASSERT_EQ(basis.size(), 2u);
  for (const auto& f : basis) EXPECT_LE(multiply(p, f).max_abs(interior(w, p)), 1e-10 * f.max_abs());
}

TEST(KernelBasis, DimensionAndIndependenceForRandomRoots) {
  std::mt19937_64 rng(6);
  const Window w{-32, 32};
  for (int t = 0; t < 10; ++t) {
    LaurentPoly p = LaurentPoly::constant(1.0);
    for (int j = 0; j < 4; ++j)
      p = p * linear(std::polar(0.5 * std::pow(4.0, testing::uniform(rng)), 2 * std::numbers::pi * testing::uniform(rng)));
    p = p * LaurentPoly::monomial(-2);
    const auto basis = kernel_basis(roots(p), w);
    ASSERT_EQ(basis.size(), 4u);
    Eigen::MatrixXcd B(w.size(), 4);
    for (int j = 0; j < 4; ++j) {
      EXPECT_LE(multiply(p, basis[j]).max_abs(interior(w, p)), 1e-10 * basis[j].max_abs());
      for (int i = w.lo; i <= w.hi; ++i) B(i - w.lo, j) = basis[j][i];
      B.col(j).normalize();
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(B).singularValues();
    EXPECT_GT(sv.minCoeff(), 1e-8);
  }
}

TEST(KernelBasis, RepeatedRootUsesFallingFactorials) {
  const LaurentPoly p = linear(1.5) * linear(1.5) * LaurentPoly::monomial(-1);
  const Window w{-24, 24};
  const auto basis = kernel_basis(roots(p, 1e-6), w);
  ASSERT_EQ(basis.size(), 2u);
  for (const auto& f : basis) EXPECT_LE(multiply(p, f).max_abs(interior(w, p)), 1e-10 * f.max_abs());
}

TEST(SolveDivision, TrivialTargets) {
  const LaurentPoly p = linear(2.0);
  const Window w{-16, 16};
  const BilateralSeries target = BilateralSeries::from_poly(p, w);
  const BilateralSeries s = solve_division(target, p);
  EXPECT_LT((multiply(p, s) - target).max_abs(interior(w, p)), 1e-10);

  const BilateralSeries zero = solve_division(BilateralSeries::zeros(w), p);
  EXPECT_EQ(zero.max_abs(), 0.0);
}

TEST(SolveDivision, RandomTargetNearUnitCircleRoot) {
  std::mt19937_64 rng(7);
  const Window w{-16, 16};
  const BilateralSeries target = random_series(rng, w);
  const LaurentPoly p = linear(2.0);
  const BilateralSeries s = solve_division(target, p);
  EXPECT_LT((multiply(p, s) - target).max_abs(interior(w, p)), 1e-9 * target.max_abs());
}

TEST(BilateralSeries, BinaryOpsUseIntersectionWindow) {
  const BilateralSeries a = BilateralSeries::zeros({-4, 6});
  const BilateralSeries b = BilateralSeries::zeros({-8, 2});
  const BilateralSeries c = a + b;
  EXPECT_EQ(c.window(), (Window{-4, 2}));
  EXPECT_EQ(c.coeffs().size(), 7u);
  EXPECT_FALSE(c.note().empty());
}

}  // namespace
}  // namespace qtrace
