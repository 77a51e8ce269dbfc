#include "sosrate/certify.h"

#include <random>

#include <gtest/gtest.h>

#include "sample_points.h"

namespace sosrate {
namespace {

using testing::AllKinds;
using testing::MakeClass;
using testing::SamplePoints;

class CertificateAtSamples : public ::testing::TestWithParam<AlgorithmKind> {};

TEST_P(CertificateAtSamples, IdentityAndPsdHoldExactly) {
  const auto points = SamplePoints(GetParam());
  ASSERT_GE(points.size(), 20u);
  for (const auto& [fc, spec] : points) {
    const auto problem = BuildScenario(fc, spec);
    const auto cert = Catalog(problem.key).Evaluate(fc, spec);
    EXPECT_EQ(cert.t, RateFormula(fc, spec));
    const auto id = VerifyIdentity(cert, problem);
    EXPECT_TRUE(id.holds) << problem.key << " mu=" << ToString(fc.mu) << " L=" << ToString(fc.L);
    EXPECT_TRUE(id.multipliers_nonnegative);
    EXPECT_TRUE(VerifyPsd(cert.gram, PsdMethod::kRationalLdl).is_psd);
    EXPECT_TRUE(VerifyPsd(cert.gram, PsdMethod::kCharpolyDescartes).is_psd);
  }
}

INSTANTIATE_TEST_SUITE_P(AllScenarios, CertificateAtSamples, ::testing::ValuesIn(AllKinds()),
                         [](const auto& info) { return std::string(ScenarioKey(info.param)); });

TEST(Certificate, PerturbedRateFails) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  const auto fc = MakeClass(1, 10);
  const auto problem = BuildScenario(fc, s);
  auto cert = Catalog("gd_els").Evaluate(fc, s);
  cert.t -= Rational(1, 1000);
  const auto id = VerifyIdentity(cert, problem);
  EXPECT_FALSE(id.holds);
  EXPECT_FALSE(id.discrepancies.empty());
}

TEST(Certificate, SosFormMatchesGram) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  const auto fc = MakeClass(1, 4);  // sqrt(kappa) rational
  const auto cert = Catalog("gd_els").Evaluate(fc, s);
  ASSERT_TRUE(cert.sos_form.has_value());
  const auto problem = BuildScenario(fc, s);
  EXPECT_EQ(cert.sos_form->Expand(problem.catalog).gram(), cert.gram);
}

TEST(Certificate, MismatchedKeyRejected) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  const auto fc = MakeClass(1, 10);
  const auto cert = Catalog("gd_els").Evaluate(fc, s);
  s.kind = AlgorithmKind::kGdWolfe;
  s.c1 = Rational(1, 10);
  s.c2 = Rational(1, 2);
  EXPECT_THROW(VerifyIdentity(cert, BuildScenario(fc, s)), std::invalid_argument);
  EXPECT_THROW(Catalog("gd_newton"), std::invalid_argument);
}

TEST(RateFormula, KnownValues) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  EXPECT_EQ(RateFormula(MakeClass(1, 10), s), Rational(81, 121));
  s.kind = AlgorithmKind::kGdConstant;
  s.gamma = Rational(19, 100);
  EXPECT_EQ(RhoGamma(s.gamma, MakeClass(1, 10)), Rational(9, 10));
  EXPECT_EQ(RateFormula(MakeClass(1, 10), s), Rational(81, 100));
  s.kind = AlgorithmKind::kGdWolfe;
  s.c1 = Rational(1, 10);
  s.c2 = Rational(9, 10);
  EXPECT_EQ(RateFormula(MakeClass(1, 10), s), Rational(499, 500));
}

RationalMatrix RandomSymmetric(std::mt19937_64& rng, int n, int rank, bool psd) {
  std::uniform_int_distribution<int> d(-4, 4);
  RationalMatrix m(n);
  for (int r = 0; r < rank; ++r) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = d(rng);
    const Rational w = psd ? Rational(1 + r % 3) : Rational(r % 2 ? -1 : 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += w * v[i] * v[j];
  }
  return m;
}

TEST(VerifyPsd, MethodsAgreeOnRandomMatrices) {
  std::mt19937_64 rng(11);
  int psd_seen = 0, indefinite_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 6;
    const int rank = trial % (n + 1);
    const auto m = RandomSymmetric(rng, n, rank, trial % 3 != 0);
    const bool ldl = VerifyPsd(m, PsdMethod::kRationalLdl).is_psd;
    const bool descartes = VerifyPsd(m, PsdMethod::kCharpolyDescartes).is_psd;
    EXPECT_EQ(ldl, descartes) << "trial " << trial;
    (ldl ? psd_seen : indefinite_seen)++;
  }
  EXPECT_GT(psd_seen, 50);
  EXPECT_GT(indefinite_seen, 20);
}

TEST(VerifyPsd, ZeroDiagonalWithOffDiagonal) {
  RationalMatrix m(2);
  m(0, 1) = m(1, 0) = 1;
  EXPECT_FALSE(VerifyPsd(m).is_psd);
  EXPECT_FALSE(VerifyPsd(m, PsdMethod::kCharpolyDescartes).is_psd);
  m(0, 1) = 0;
  EXPECT_THROW(VerifyPsd(m), std::invalid_argument);
}

TEST(CharacteristicPolynomial, Diagonal) {
  RationalMatrix m(3);
  m(0, 0) = 1;
  m(1, 1) = 2;
  m(2, 2) = 3;
  EXPECT_EQ(CharacteristicPolynomial(m), (std::vector<Rational>{1, -6, 11, -6}));
}

TEST(PgmExactLineSearch, GramCharpoly) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kPgmExactLineSearch;
  const auto cert = Catalog("pgm_els").Evaluate(MakeClass(1, 3, true), s);
  const auto cp = CharacteristicPolynomial(cert.gram);
  ASSERT_EQ(cp.size(), 10u);
  EXPECT_EQ(cp[0], 1);
  EXPECT_EQ(cp[1], -3);
  EXPECT_EQ(cp[2], Rational(81, 32));
  EXPECT_EQ(cp[3], Rational(-223, 512));
  for (size_t i = 4; i < cp.size(); ++i) EXPECT_EQ(cp[i], 0);
  // the closed-form cubic has the same sign pattern
  const auto closed = ClosedFormPgmElsCubic(1, 3);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(sgn(closed[i]), sgn(cp[i]));
}

TEST(CompareArmijo, Examples) {
  const auto a = CompareArmijo(Rational(1, 4), 2, 10);
  EXPECT_EQ(a.t_new, Rational(77, 80));
  EXPECT_EQ(*a.t_ly, Rational(39, 40));
  EXPECT_TRUE(a.new_below_ly);
  EXPECT_FALSE(a.t_nemi.has_value());
  const auto b = CompareArmijo(Rational(3, 4), 2, 10);
  EXPECT_EQ(*b.t_nemi, Rational(119, 122));
  EXPECT_TRUE(b.new_not_above_nemi);
  EXPECT_THROW(CompareArmijo(Rational(1, 4), 1, 10), InadmissibleParameters);
}

}  // namespace
}  // namespace sosrate
