#include "sosrate/scenarios.h"

#include <algorithm>
#include <array>

namespace sosrate {

namespace {

constexpr std::array<std::pair<AlgorithmKind, std::string_view>, 7> kKeys = {{
    {AlgorithmKind::kGdConstant, "gd_constant"},
    {AlgorithmKind::kGdExactLineSearch, "gd_els"},
    {AlgorithmKind::kGdArmijo, "gd_armijo"},
    {AlgorithmKind::kGdGoldstein, "gd_goldstein"},
    {AlgorithmKind::kGdWolfe, "gd_wolfe"},
    {AlgorithmKind::kPgmConstant, "pgm_constant"},
    {AlgorithmKind::kPgmExactLineSearch, "pgm_els"},
}};

std::string Normalize(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

// Sample points in the order k, k+1, * so that ordered pairs come out as
// (k,k+1), (k,*), (k+1,k), (k+1,*), (*,k), (*,k+1).
const std::vector<PointSymbols> kGdPoints = {
    {"f_k", "x_k", "g_k"}, {"f_k1", "x_k1", "g_k1"}, {"f_star", "x_star", "g_star"}};
const std::vector<PointSymbols> kSmoothPartPoints = {
    {"a_k", "x_k", "r_k"}, {"a_k1", "x_k1", "r_k1"}, {"a_star", "x_star", "r_star"}};
const std::vector<PointSymbols> kNonsmoothPartPoints = {
    {"b_k", "x_k", "s_k"}, {"b_k1", "x_k1", "sbar_k1"}, {"b_star", "x_star", "s_star"}};

NamedPolynomial Named(std::string name, StructuredPolynomial p) {
  return NamedPolynomial{std::move(name), std::move(p)};
}

}  // namespace

void FunctionClass::Validate() const {
  if (sgn(mu) < 0) throw InadmissibleParameters("function class requires mu >= 0");
  if (!(L > mu)) throw InadmissibleParameters("function class requires L > mu (alpha is singular)");
}

Rational FunctionClass::Alpha() const {
  Validate();
  Rational a = L / (2 * (L - mu));
  a.canonicalize();
  return a;
}

std::optional<Rational> FunctionClass::Kappa() const {
  if (sgn(mu) <= 0) return std::nullopt;
  Rational k = L / mu;
  k.canonicalize();
  return k;
}

bool AlgorithmSpec::IsProximal() const {
  return kind == AlgorithmKind::kPgmConstant || kind == AlgorithmKind::kPgmExactLineSearch;
}

void AlgorithmSpec::Validate(const FunctionClass& fc) const {
  fc.Validate();
  if (sgn(fc.mu) <= 0) {
    throw InadmissibleParameters(
        "strong convexity mu > 0 required: the contraction factor of " +
        std::string(ScenarioKey(kind)) + " degenerates to 1 at mu = 0");
  }
  if (IsProximal() != fc.composite) {
    throw InadmissibleParameters(IsProximal()
                                     ? "proximal methods require a composite function class"
                                     : "gradient methods require a non-composite function class");
  }
  switch (kind) {
    case AlgorithmKind::kGdConstant:
    case AlgorithmKind::kPgmConstant:
      if (!(sgn(gamma) > 0 && gamma < Rational(2) / fc.L)) {
        throw InadmissibleParameters("step size must satisfy 0 < gamma < 2/L");
      }
      break;
    case AlgorithmKind::kGdExactLineSearch:
    case AlgorithmKind::kPgmExactLineSearch:
      break;
    case AlgorithmKind::kGdArmijo: {
      if (!(sgn(delta) >= 0 && delta < 1)) {
        throw InadmissibleParameters("Armijo noise level must satisfy 0 <= delta < 1");
      }
      const Rational bound = (1 - delta) / ((1 + delta) * (1 + delta));
      if (!(sgn(epsilon) > 0 && epsilon < bound)) {
        throw InadmissibleParameters(
            "Armijo parameter must satisfy 0 < epsilon < (1 - delta)/(1 + delta)^2");
      }
      if (!(eta > 1)) throw InadmissibleParameters("Armijo backtracking factor must satisfy eta > 1");
      break;
    }
    case AlgorithmKind::kGdGoldstein: {
      // delta < sqrt(5) - 2  <=>  (delta + 2)^2 < 5 for delta >= 0.
      if (!(sgn(delta) >= 0 && (delta + 2) * (delta + 2) < 5)) {
        throw InadmissibleParameters("Goldstein noise level must satisfy 0 <= delta < sqrt(5) - 2");
      }
      const Rational lower = 1 - (1 - delta) / ((1 + delta) * (1 + delta));
      if (!(epsilon > lower && epsilon < Rational(1, 2))) {
        throw InadmissibleParameters(
            "Goldstein parameter must satisfy 1 - (1 - delta)/(1 + delta)^2 < epsilon < 1/2");
      }
      break;
    }
    case AlgorithmKind::kGdWolfe:
      if (!(sgn(c1) > 0 && c1 < c2 && c2 < 1)) {
        throw InadmissibleParameters("Wolfe parameters must satisfy 0 < c1 < c2 < 1");
      }
      break;
  }
}

std::string_view ScenarioKey(AlgorithmKind kind) {
  for (const auto& [k, name] : kKeys) {
    if (k == kind) return name;
  }
  return "unknown";
}

AlgorithmKind ParseAlgorithmKind(std::string_view key) {
  const std::string normalized = Normalize(key);
  for (const auto& [k, name] : kKeys) {
    if (name == normalized) return k;
  }
  std::string known;
  for (const auto& name : ScenarioKeys()) known += (known.empty() ? "" : ", ") + name;
  throw std::invalid_argument("unknown scenario '" + std::string(key) + "'; available: " + known);
}

const std::vector<std::string>& ScenarioKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, name] : kKeys) out.emplace_back(name);
    return out;
  }();
  return keys;
}

std::string_view MetricName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kObjectiveAccuracy:
      return "objective_accuracy";
    case MetricKind::kDistanceSquared:
      return "distance_squared";
    case MetricKind::kGradientNormSquared:
      return "gradient_norm_squared";
  }
  return "unknown";
}

MetricKind ParseMetricKind(std::string_view name) {
  const std::string normalized = Normalize(name);
  for (MetricKind m : {MetricKind::kObjectiveAccuracy, MetricKind::kDistanceSquared,
                       MetricKind::kGradientNormSquared}) {
    if (MetricName(m) == normalized) return m;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) +
                              "'; available: objective_accuracy, distance_squared, "
                              "gradient_norm_squared");
}

MetricKind DefaultMetric(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kGdConstant:
      return MetricKind::kDistanceSquared;
    case AlgorithmKind::kPgmConstant:
      return MetricKind::kGradientNormSquared;
    default:
      return MetricKind::kObjectiveAccuracy;
  }
}

StructuredPolynomial RateProblem::Target(const Rational& t) const {
  const std::pair<Rational, StructuredPolynomial> terms[] = {{t, gain}, {-1, loss}};
  return Combine(terms);
}

std::vector<StructuredPolynomial> Interpolability(const FunctionClass& fc,
                                                  const CatalogPtr& catalog,
                                                  const std::vector<PointSymbols>& points) {
  if (points.size() < 2) throw std::invalid_argument("interpolability needs at least two points");
  const Rational alpha = fc.Alpha();
  const Rational inv_L = 1 / fc.L;
  const Rational mu_over_L = fc.mu / fc.L;
  std::vector<StructuredPolynomial> out;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const PointSymbols& pi = points[i];
      const PointSymbols& pj = points[j];
      const VectorExpr dx = VectorExpr(pi.point) - VectorExpr(pj.point);
      const VectorExpr dg = VectorExpr(pi.gradient) - VectorExpr(pj.gradient);
      const std::pair<Rational, StructuredPolynomial> terms[] = {
          {1, StructuredPolynomial::Scalar(catalog, pi.value)},
          {-1, StructuredPolynomial::Scalar(catalog, pj.value)},
          {-1, StructuredPolynomial::Inner(catalog, VectorExpr(pj.gradient), dx)},
          {-alpha * inv_L, StructuredPolynomial::SquaredNorm(catalog, dg)},
          {-alpha * fc.mu, StructuredPolynomial::SquaredNorm(catalog, dx)},
          // (g_j - g_i)^T (x_j - x_i) = <dg, dx>.
          {2 * alpha * mu_over_L, StructuredPolynomial::Inner(catalog, dg, dx)},
      };
      out.push_back(Combine(terms));
    }
  }
  return out;
}

std::vector<StructuredPolynomial> ConvexInterpolability(const CatalogPtr& catalog,
                                                        const std::vector<PointSymbols>& points) {
  if (points.size() < 2) throw std::invalid_argument("interpolability needs at least two points");
  std::vector<StructuredPolynomial> out;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const VectorExpr dx = VectorExpr(points[i].point) - VectorExpr(points[j].point);
      const std::pair<Rational, StructuredPolynomial> terms[] = {
          {1, StructuredPolynomial::Scalar(catalog, points[i].value)},
          {-1, StructuredPolynomial::Scalar(catalog, points[j].value)},
          {-1, StructuredPolynomial::Inner(catalog, VectorExpr(points[j].gradient), dx)},
      };
      out.push_back(Combine(terms));
    }
  }
  return out;
}

CatalogPtr FullCatalog(AlgorithmKind kind) {
  static const CatalogPtr gd = MakeCatalog({"f_star", "f_k", "f_k1"},
                                           {"x_star", "x_k", "x_k1", "g_star", "g_k", "g_k1"});
  static const CatalogPtr pgm = MakeCatalog(
      {"a_star", "a_k", "a_k1", "b_star", "b_k", "b_k1"},
      {"x_star", "x_k", "x_k1", "r_star", "r_k", "r_k1", "s_star", "s_k", "sbar_k1"});
  const bool proximal =
      kind == AlgorithmKind::kPgmConstant || kind == AlgorithmKind::kPgmExactLineSearch;
  return proximal ? pgm : gd;
}

Rational DecreaseCoefficient(const AlgorithmSpec& spec, const FunctionClass& fc) {
  const Rational one_minus_delta = 1 - spec.delta;
  const Rational slack = one_minus_delta / ((1 + spec.delta) * (1 + spec.delta));
  Rational c;
  switch (spec.kind) {
    case AlgorithmKind::kGdArmijo:
      c = 2 * spec.epsilon * one_minus_delta * one_minus_delta / (spec.eta * fc.L) *
          (slack - spec.epsilon);
      break;
    case AlgorithmKind::kGdGoldstein:
      c = 2 * spec.epsilon * one_minus_delta * one_minus_delta / fc.L *
          (slack - (1 - spec.epsilon));
      break;
    case AlgorithmKind::kGdWolfe:
      c = spec.c1 * (1 - spec.c2) / fc.L;
      break;
    default:
      throw std::invalid_argument("decrease coefficient is defined for line-search rules only");
  }
  c.canonicalize();
  return c;
}

AlgorithmConstraints AlgorithmConstraintsFor(const AlgorithmSpec& spec, const FunctionClass& fc) {
  spec.Validate(fc);
  const CatalogPtr cat = FullCatalog(spec.kind);
  AlgorithmConstraints out;
  auto inner = [&](const VectorExpr& a, const VectorExpr& b) {
    return StructuredPolynomial::Inner(cat, a, b);
  };
  auto scalar = [&](std::string_view s) { return StructuredPolynomial::Scalar(cat, s); };

  if (!spec.IsProximal()) out.eliminations.push_back({"g_star", VectorExpr()});

  switch (spec.kind) {
    case AlgorithmKind::kGdConstant:
      out.eliminations.push_back(
          {"x_k1", VectorExpr("x_k") - spec.gamma * VectorExpr("g_k")});
      break;
    case AlgorithmKind::kGdExactLineSearch:
      out.equalities.push_back(Named("v1", inner("g_k1", VectorExpr("x_k1") - VectorExpr("x_k"))));
      out.equalities.push_back(Named("v2", inner("g_k1", "g_k")));
      break;
    case AlgorithmKind::kGdArmijo:
    case AlgorithmKind::kGdGoldstein:
    case AlgorithmKind::kGdWolfe: {
      const Rational c = DecreaseCoefficient(spec, fc);
      const std::pair<Rational, StructuredPolynomial> terms[] = {
          {1, scalar("f_k")}, {-1, scalar("f_k1")}, {-c, inner("g_k", "g_k")}};
      out.inequalities.push_back(Named("h7", Combine(terms)));
      break;
    }
    case AlgorithmKind::kPgmConstant:
      out.eliminations.push_back(
          {"x_k1", VectorExpr("x_k") - spec.gamma * (VectorExpr("r_k") + VectorExpr("sbar_k1"))});
      out.eliminations.push_back({"s_star", -VectorExpr("r_star")});
      break;
    case AlgorithmKind::kPgmExactLineSearch: {
      const VectorExpr next = VectorExpr("r_k1") + VectorExpr("sbar_k1");
      out.equalities.push_back(Named("v1", inner(next, VectorExpr("r_k") + VectorExpr("sbar_k1"))));
      out.equalities.push_back(Named("v2", inner(next, VectorExpr("x_k1") - VectorExpr("x_k"))));
      out.equalities.push_back(
          Named("v3", StructuredPolynomial::SquaredNorm(cat, VectorExpr("r_star") + VectorExpr("s_star"))));
      break;
    }
  }
  return out;
}

RateProblem BuildScenario(const FunctionClass& fc, const AlgorithmSpec& spec) {
  return BuildScenario(fc, spec, DefaultMetric(spec.kind));
}

RateProblem BuildScenario(const FunctionClass& fc, const AlgorithmSpec& spec, MetricKind metric) {
  spec.Validate(fc);
  if (metric != DefaultMetric(spec.kind)) {
    throw std::invalid_argument("metric " + std::string(MetricName(metric)) +
                                " is not analysed for " + std::string(ScenarioKey(spec.kind)) +
                                "; use " + std::string(MetricName(DefaultMetric(spec.kind))));
  }
  const CatalogPtr cat = FullCatalog(spec.kind);
  auto scalar = [&](std::string_view s) { return StructuredPolynomial::Scalar(cat, s); };

  StructuredPolynomial gain(cat), loss(cat);
  switch (metric) {
    case MetricKind::kObjectiveAccuracy:
      if (spec.IsProximal()) {
        const StructuredPolynomial optimum = scalar("a_star") + scalar("b_star");
        gain = scalar("a_k") + scalar("b_k") - optimum;
        loss = scalar("a_k1") + scalar("b_k1") - optimum;
      } else {
        gain = scalar("f_k") - scalar("f_star");
        loss = scalar("f_k1") - scalar("f_star");
      }
      break;
    case MetricKind::kDistanceSquared:
      gain = StructuredPolynomial::SquaredNorm(cat, VectorExpr("x_k") - VectorExpr("x_star"));
      loss = StructuredPolynomial::SquaredNorm(cat, VectorExpr("x_k1") - VectorExpr("x_star"));
      break;
    case MetricKind::kGradientNormSquared:
      gain = StructuredPolynomial::SquaredNorm(cat, VectorExpr("r_k") + VectorExpr("s_k"));
      loss = StructuredPolynomial::SquaredNorm(cat, VectorExpr("r_k1") + VectorExpr("sbar_k1"));
      break;
  }

  std::vector<NamedPolynomial> inequalities;
  int index = 1;
  if (spec.IsProximal()) {
    for (auto& p : Interpolability(fc, cat, kSmoothPartPoints)) {
      inequalities.push_back(Named("h" + std::to_string(index++), std::move(p)));
    }
    for (auto& p : ConvexInterpolability(cat, kNonsmoothPartPoints)) {
      inequalities.push_back(Named("h" + std::to_string(index++), std::move(p)));
    }
  } else {
    for (auto& p : Interpolability(fc, cat, kGdPoints)) {
      inequalities.push_back(Named("h" + std::to_string(index++), std::move(p)));
    }
  }

  AlgorithmConstraints alg = AlgorithmConstraintsFor(spec, fc);
  for (auto& h : alg.inequalities) inequalities.push_back(std::move(h));

  RateProblem problem{std::string(ScenarioKey(spec.kind)),
                      cat,
                      std::move(gain),
                      std::move(loss),
                      std::move(inequalities),
                      std::move(alg.equalities),
                      alg.eliminations,
                      fc,
                      spec,
                      metric};

  for (const Elimination& e : alg.eliminations) {
    auto apply = [&](StructuredPolynomial& p) { p = SubstituteVector(p, e.target, e.replacement); };
    apply(problem.gain);
    apply(problem.loss);
    for (auto& h : problem.inequalities) apply(h.poly);
    for (auto& v : problem.equalities) apply(v.poly);
    problem.catalog = problem.gain.catalog();
  }
  return problem;
}

}  // namespace sosrate
