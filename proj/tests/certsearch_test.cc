#include "sosrate/certsearch.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sosrate/certify.h"

namespace sosrate {
namespace {

FunctionClass Class(Rational mu, Rational L, bool composite = false) {
  FunctionClass fc;
  fc.mu = mu;
  fc.L = L;
  fc.composite = composite;
  return fc;
}

TEST(SolveRate, GdExactLineSearchExample) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  const auto problem = BuildScenario(Class(1, 10), s);
  const auto sdp = BuildSosSdp(problem);
  EXPECT_EQ(sdp.psd_constant.rows(), problem.catalog->num_vectors());
  const auto r = SolveRate(sdp);
  ASSERT_EQ(r.status, SolverStatus::kOptimal) << r.message;
  EXPECT_NEAR(r.t, 81.0 / 121.0, 1e-6);
  EXPECT_LT(CertificateResidual(problem, r), 1e-6);
  EXPECT_GE(r.min_gram_eigenvalue, -1e-7);
}

TEST(SolveRate, GdConstantMatchesRho) {
  for (const Rational& gamma : {Rational(1, 20), Rational(2, 11), Rational(19, 100)}) {
    AlgorithmSpec s;
    s.kind = AlgorithmKind::kGdConstant;
    s.gamma = gamma;
    const auto r = SolveRate(BuildSosSdp(BuildScenario(Class(1, 10), s)));
    ASSERT_EQ(r.status, SolverStatus::kOptimal);
    EXPECT_NEAR(r.t, ToDouble(RateFormula(Class(1, 10), s)), 1e-6);
  }
}

TEST(SolveRate, PepDualAgrees) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kPgmExactLineSearch;
  const auto problem = BuildScenario(Class(1, 3, true), s);
  const auto a = SolveRate(BuildSosSdp(problem));
  const auto b = SolveRate(BuildPepDual(problem));
  ASSERT_EQ(a.status, SolverStatus::kOptimal);
  ASSERT_EQ(b.status, SolverStatus::kOptimal);
  EXPECT_NEAR(a.t, b.t, 1e-6);
  EXPECT_NEAR(a.t, 0.25, 1e-6);
}

TEST(SolveRate, FixedTooSmallIsInfeasible) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  auto sdp = BuildSosSdp(BuildScenario(Class(1, 10), s));
  const auto r = SparsifyMultipliers(sdp, 0.5);
  EXPECT_EQ(r.status, SolverStatus::kInfeasible);
}

TEST(SparsifyMultipliers, GdConstantPattern) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdConstant;
  s.gamma = Rational(1, 10);
  const auto fc = Class(1, 10);
  const auto sdp = BuildSosSdp(BuildScenario(fc, s));
  const double rho = ToDouble(RhoGamma(s.gamma, fc));
  const auto r = SparsifyMultipliers(sdp, rho * rho + 1e-9);
  ASSERT_EQ(r.status, SolverStatus::kOptimal) << r.message;
  ASSERT_EQ(r.sigma.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    if (i == 1 || i == 4) EXPECT_NEAR(r.sigma[i], 2 * 0.1 * rho, 1e-4);
    else EXPECT_LE(r.sigma[i], 1e-6);
  }
}

TEST(WriteSdpa, ProducesBlocks) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::kGdExactLineSearch;
  std::ostringstream os;
  WriteSdpa(BuildSosSdp(BuildScenario(Class(1, 10), s)), os);
  EXPECT_GT(os.str().size(), 50u);
}

}  // namespace
}  // namespace sosrate
