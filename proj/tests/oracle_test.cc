#include "sosrate/oracle.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sosrate/certify.h"
#include "sample_points.h"

namespace sosrate {
namespace {

using testing::MakeClass;

AlgorithmSpec Spec(AlgorithmKind kind) {
  AlgorithmSpec s;
  s.kind = kind;
  return s;
}

TEST(TestFunction, ValidationAndMinimizer) {
  const auto fc = MakeClass(1, 10, true);
  const auto f = TestFunction::Composite({1, 10}, {2, Rational(-1, 20)}, 1);
  EXPECT_NO_THROW(f.Validate(fc));
  EXPECT_EQ(f.Minimizer(), (std::vector<Rational>{1, 0}));
  EXPECT_THROW(TestFunction::Quadratic({11}, {0}).Validate(MakeClass(1, 10)), InadmissibleParameters);
  EXPECT_THROW(f.Validate(MakeClass(1, 10)), InadmissibleParameters);
}

TEST(Witness, GdExactLineSearchIsTight) {
  for (const auto& [mu, L] : {std::pair<Rational, Rational>{1, 10}, {1, 100}, {2, 3}}) {
    const auto fc = MakeClass(mu, L);
    const auto spec = Spec(AlgorithmKind::kGdExactLineSearch);
    const auto w = TightnessWitness(fc, spec);
    RunOptions o;
    o.steps = 6;
    const auto trace = sosrate::Run<Rational>(spec, fc, w.function, w.x0, o);
    const Rational t = RateFormula(fc, spec);
    for (int k = 0; k + 1 < trace.size(); ++k) {
      const Rational now = MetricValue(trace, MetricKind::kObjectiveAccuracy, k);
      const Rational next = MetricValue(trace, MetricKind::kObjectiveAccuracy, k + 1);
      EXPECT_EQ(next, t * now);
    }
  }
}

TEST(Witness, GdConstantAttainsRhoSquared) {
  const auto fc = MakeClass(1, 10);
  for (const Rational& gamma : {Rational(1, 20), Rational(2, 11), Rational(19, 100)}) {
    auto spec = Spec(AlgorithmKind::kGdConstant);
    spec.gamma = gamma;
    const auto w = TightnessWitness(fc, spec);
    const auto trace = sosrate::Run<Rational>(spec, fc, w.function, w.x0, RunOptions{});
    const auto report = CheckAgainstBound(trace, RateFormula(fc, spec), MetricKind::kDistanceSquared, 0);
    EXPECT_TRUE(report.passes);
    EXPECT_NEAR(report.max_ratio, ToDouble(RateFormula(fc, spec)), 1e-15);
  }
}

TEST(Witness, PgmExactLineSearchWithZeroLambda) {
  const auto fc = MakeClass(1, 10, true);
  const auto spec = Spec(AlgorithmKind::kPgmExactLineSearch);
  const auto w = TightnessWitness(fc, spec);
  EXPECT_EQ(w.function.lambda, 0);
  const auto trace = sosrate::Run<Rational>(spec, fc, w.function, w.x0, RunOptions{});
  const auto report = CheckAgainstBound(trace, RateFormula(fc, spec), MetricKind::kObjectiveAccuracy, 0);
  EXPECT_TRUE(report.passes);
  for (double r : report.ratios) EXPECT_NEAR(r, 81.0 / 121.0, 1e-12);
}

TEST(Run, ArmijoSingleStepLimit) {
  // kappa, eta -> 1 with epsilon = 1/2: one step nearly solves the problem
  const auto fc = MakeClass(1, Rational(1001, 1000));
  auto spec = Spec(AlgorithmKind::kGdArmijo);
  spec.epsilon = Rational(1, 2);
  spec.eta = Rational(1001, 1000);
  RunOptions o;
  o.steps = 1;
  const auto trace = sosrate::Run<double>(spec, fc, TestFunction::TwoEigenvalue(fc), WitnessStart(fc), o);
  const auto report = CheckAgainstBound(trace, RateFormula(fc, spec), MetricKind::kObjectiveAccuracy);
  EXPECT_TRUE(report.passes);
  EXPECT_LT(report.max_ratio, 1e-4);
}

TEST(Run, NoiseModelsKeepRelativeError) {
  const auto fc = MakeClass(1, 10);
  auto spec = Spec(AlgorithmKind::kGdArmijo);
  spec.epsilon = Rational(1, 4);
  spec.eta = 2;
  spec.delta = Rational(1, 10);
  for (auto noise : {NoiseModel::kReflection, NoiseModel::kShrink, NoiseModel::kStretch}) {
    RunOptions o;
    o.noise = noise;
    o.seed = 9;
    o.steps = 4;
    const auto trace = sosrate::Run<Rational>(spec, fc, TestFunction::Quadratic({1, 4, 10}, {1, 0, -1}), {2, 1, 3}, o);
    for (int k = 0; k + 1 < trace.size(); ++k) {
      Rational err = 0, norm = 0;
      for (size_t i = 0; i < trace.gradient[k].size(); ++i) {
        const Rational e = trace.direction[k][i] + trace.gradient[k][i];
        err += e * e;
        norm += trace.gradient[k][i] * trace.gradient[k][i];
      }
      EXPECT_LE(err, spec.delta * spec.delta * norm);
    }
    EXPECT_TRUE(CheckAgainstBound(trace, RateFormula(fc, spec), MetricKind::kObjectiveAccuracy, 0).passes);
  }
}

TEST(Run, DeterministicForSeed) {
  const auto fc = MakeClass(1, 10);
  auto spec = Spec(AlgorithmKind::kGdGoldstein);
  spec.epsilon = Rational(2, 5);
  spec.delta = Rational(1, 10);
  RunOptions o;
  o.noise = NoiseModel::kReflection;
  o.seed = 42;
  const auto f = TestFunction::Quadratic({1, 10}, {0, 1});
  const auto a = sosrate::Run<double>(spec, fc, f, {3, 3}, o);
  const auto b = sosrate::Run<double>(spec, fc, f, {3, 3}, o);
  EXPECT_EQ(a.x, b.x);
}

TEST(ConstraintAudit, CleanOnExactGdRun) {
  const auto fc = MakeClass(1, 10);
  const auto spec = Spec(AlgorithmKind::kGdExactLineSearch);
  RunOptions o;
  o.steps = 4;  // exact line-search denominators grow quickly
  const auto trace = sosrate::Run<Rational>(spec, fc, TestFunction::Quadratic({1, 3, 10}, {1, 2, 3}), {0, 0, 0}, o);
  const auto audit = ConstraintAudit(trace, BuildScenario(fc, spec), 0);
  EXPECT_GT(audit.checked, 0);
  EXPECT_TRUE(audit.clean());
  auto other = Spec(AlgorithmKind::kGdWolfe);
  other.c1 = Rational(1, 10);
  other.c2 = Rational(1, 2);
  EXPECT_THROW(ConstraintAudit(trace, BuildScenario(fc, other)), std::invalid_argument);
}

TEST(ExportCsv, HeaderAndRows) {
  const auto fc = MakeClass(1, 10);
  const auto spec = Spec(AlgorithmKind::kGdExactLineSearch);
  RunOptions o;
  o.steps = 3;
  const auto trace = sosrate::Run<Rational>(spec, fc, TestFunction::TwoEigenvalue(fc), WitnessStart(fc), o);
  std::ostringstream os;
  ExportCsv(trace, MetricKind::kObjectiveAccuracy, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,f,dist_sq,grad_sq,gamma,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(RandomTestFunction, MembersOfClass) {
  std::mt19937_64 rng(1);
  for (bool composite : {false, true}) {
    const auto fc = MakeClass(1, 10, composite);
    for (int dim = 1; dim <= 4; ++dim) {
      const auto f = RandomTestFunction(fc, dim, rng);
      EXPECT_EQ(f.dim(), dim);
      EXPECT_NO_THROW(f.Validate(fc));
      EXPECT_EQ(RandomPoint(dim, rng).size(), static_cast<size_t>(dim));
    }
  }
}

TEST(Run, InadmissibleRejected) {
  const auto fc = MakeClass(1, 10);
  auto spec = Spec(AlgorithmKind::kGdConstant);
  spec.gamma = 1;
  EXPECT_THROW(sosrate::Run<double>(spec, fc, TestFunction::TwoEigenvalue(fc), {1, 1}, RunOptions{}), InadmissibleParameters);
}

}  // namespace
}  // namespace sosrate
