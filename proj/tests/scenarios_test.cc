#include "sosrate/scenarios.h"

#include <random>

#include <gtest/gtest.h>

namespace sosrate {
namespace {

FunctionClass Class(Rational mu, Rational L, bool composite = false) {
  FunctionClass fc;
  fc.mu = mu;
  fc.L = L;
  fc.composite = composite;
  return fc;
}

AlgorithmSpec Spec(AlgorithmKind kind) {
  AlgorithmSpec s;
  s.kind = kind;
  return s;
}

TEST(Keys, ParseAndName) {
  EXPECT_EQ(ParseAlgorithmKind("gd-els"), AlgorithmKind::kGdExactLineSearch);
  EXPECT_EQ(ParseAlgorithmKind("pgm_constant"), AlgorithmKind::kPgmConstant);
  EXPECT_THROW(ParseAlgorithmKind("newton"), std::invalid_argument);
  EXPECT_EQ(ScenarioKeys().size(), 7u);
  for (const auto& key : ScenarioKeys()) EXPECT_EQ(ScenarioKey(ParseAlgorithmKind(key)), key);
  EXPECT_EQ(ParseMetricKind(MetricName(MetricKind::kGradientNormSquared)), MetricKind::kGradientNormSquared);
}

TEST(FunctionClass, Validation) {
  EXPECT_NO_THROW(Class(1, 10).Validate());
  EXPECT_THROW(Class(2, 2).Validate(), InadmissibleParameters);
  EXPECT_THROW(Class(-1, 2).Validate(), InadmissibleParameters);
  EXPECT_EQ(Class(1, 4).Alpha(), Rational(2, 3));
  EXPECT_EQ(Class(2, 10).Kappa(), Rational(5));
  EXPECT_FALSE(Class(0, 1).Kappa().has_value());
}

TEST(AlgorithmSpec, AdmissibleRegions) {
  const auto fc = Class(1, 10);
  auto s = Spec(AlgorithmKind::kGdConstant);
  s.gamma = Rational(1, 5);
  EXPECT_THROW(s.Validate(fc), InadmissibleParameters);  // gamma = 2/L
  s.gamma = Rational(19, 100);
  EXPECT_NO_THROW(s.Validate(fc));

  auto a = Spec(AlgorithmKind::kGdArmijo);
  a.epsilon = Rational(1, 4);
  a.eta = 2;
  EXPECT_NO_THROW(a.Validate(fc));
  a.delta = Rational(1, 2);  // (1-d)/(1+d)^2 = 2/9 < 1/4
  EXPECT_THROW(a.Validate(fc), InadmissibleParameters);

  auto g = Spec(AlgorithmKind::kGdGoldstein);
  g.epsilon = Rational(1, 2);
  EXPECT_THROW(g.Validate(fc), InadmissibleParameters);
  g.epsilon = Rational(2, 5);
  g.delta = Rational(1, 10);
  EXPECT_NO_THROW(g.Validate(fc));

  auto w = Spec(AlgorithmKind::kGdWolfe);
  w.c1 = Rational(1, 2);
  w.c2 = Rational(1, 4);
  EXPECT_THROW(w.Validate(fc), InadmissibleParameters);

  EXPECT_THROW(Spec(AlgorithmKind::kGdExactLineSearch).Validate(Class(0, 1)), InadmissibleParameters);
  EXPECT_THROW(Spec(AlgorithmKind::kPgmExactLineSearch).Validate(fc), InadmissibleParameters);
}

TEST(BuildScenario, MetricMustMatch) {
  EXPECT_THROW(BuildScenario(Class(1, 10), Spec(AlgorithmKind::kGdExactLineSearch), MetricKind::kDistanceSquared),
               std::invalid_argument);
}

TEST(BuildScenario, ShapesAreSmall) {
  AlgorithmSpec specs[7];
  for (int i = 0; i < 7; ++i) specs[i].kind = static_cast<AlgorithmKind>(i);
  specs[0].gamma = specs[5].gamma = Rational(1, 10);
  specs[2].epsilon = Rational(1, 4), specs[2].eta = 2;
  specs[3].epsilon = Rational(1, 4);
  specs[4].c1 = Rational(1, 10), specs[4].c2 = Rational(9, 10);
  for (const auto& s : specs) {
    const auto p = BuildScenario(Class(1, 10, s.IsProximal()), s);
    EXPECT_EQ(p.key, ScenarioKey(s.kind));
    EXPECT_LE(p.catalog->num_vectors(), 9);
    EXPECT_FALSE(p.inequalities.empty());
    EXPECT_EQ(p.gain.catalog()->vectors(), p.catalog->vectors());
    for (const auto& h : p.inequalities) EXPECT_EQ(*h.poly.catalog(), *p.catalog) << h.name;
  }
}

TEST(Interpolability, SixConditionsOnThreePoints) {
  const auto cat = FullCatalog(AlgorithmKind::kGdExactLineSearch);
  const std::vector<PointSymbols> pts = {{"f_k", "x_k", "g_k"}, {"f_k1", "x_k1", "g_k1"}, {"f_star", "x_star", "g_star"}};
  EXPECT_EQ(Interpolability(Class(1, 10), cat, pts).size(), 6u);
  EXPECT_EQ(ConvexInterpolability(cat, pts).size(), 6u);
}

// samples of a quadratic with spectrum in [mu, L] satisfy every condition
TEST(Interpolability, HoldsOnQuadraticSamples) {
  const auto fc = Class(1, 10);
  const auto cat = FullCatalog(AlgorithmKind::kGdExactLineSearch);
  const std::vector<PointSymbols> pts = {{"f_k", "x_k", "g_k"}, {"f_k1", "x_k1", "g_k1"}, {"f_star", "x_star", "g_star"}};
  const auto conds = Interpolability(fc, cat, pts);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-8, 8);
  const std::vector<Rational> h = {1, Rational(7, 2), 10};
  for (int trial = 0; trial < 40; ++trial) {
    Assignment a;
    for (const auto& p : pts) {
      std::vector<Rational> x(3), g(3);
      Rational f = 0;
      for (int i = 0; i < 3; ++i) {
        x[i] = Fraction(d(rng), 3);
        g[i] = h[i] * x[i];
        f += h[i] * x[i] * x[i] / 2;
      }
      a.vectors[p.point] = x;
      a.vectors[p.gradient] = g;
      a.scalars[p.value] = f;
    }
    for (const auto& c : conds) EXPECT_GE(Evaluate(c, a), 0);
  }
}

TEST(DecreaseCoefficient, Wolfe) {
  auto w = Spec(AlgorithmKind::kGdWolfe);
  w.c1 = Rational(1, 10);
  w.c2 = Rational(9, 10);
  // c1 (1 - c2) / L
  EXPECT_EQ(DecreaseCoefficient(w, Class(1, 10)), Rational(1, 1000));
}

}  // namespace
}  // namespace sosrate
