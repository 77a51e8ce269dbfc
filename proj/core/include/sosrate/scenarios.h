#pragma once

// Constraint generation for one step of a first-order method: interpolation
// conditions for the function class, the algorithm's own consequences, and
// the variable eliminations applied before an SDP is built.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sosrate/polyform.h"
#include "sosrate/rational.h"

namespace sosrate {

/// Raised when a parameter falls outside a theorem's admissible region. The
/// message names the violated hypothesis.
class InadmissibleParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// F_{mu,L}, or the composite class a + b with a in F_{mu,L} and b closed
/// proper convex.
struct FunctionClass {
  Rational mu = 0;
  Rational L = 1;
  bool composite = false;

  /// Throws InadmissibleParameters unless 0 <= mu < L.
  void Validate() const;
  /// 1 / (2 (1 - mu/L)).
  Rational Alpha() const;
  /// L / mu, defined only for mu > 0.
  std::optional<Rational> Kappa() const;
};

enum class AlgorithmKind {
  kGdConstant,
  kGdExactLineSearch,
  kGdArmijo,
  kGdGoldstein,
  kGdWolfe,
  kPgmConstant,
  kPgmExactLineSearch,
};

enum class MetricKind { kObjectiveAccuracy, kDistanceSquared, kGradientNormSquared };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kGdExactLineSearch;
  Rational gamma = 0;    // constant-step kinds
  Rational epsilon = 0;  // Armijo, Goldstein
  Rational eta = 0;      // Armijo backtracking factor
  Rational delta = 0;    // relative direction noise, Armijo and Goldstein
  Rational c1 = 0;       // Wolfe
  Rational c2 = 0;

  bool IsProximal() const;
  bool IsNoisy() const { return kind == AlgorithmKind::kGdArmijo || kind == AlgorithmKind::kGdGoldstein; }
  /// Throws InadmissibleParameters naming the violated hypothesis.
  void Validate(const FunctionClass& function_class) const;
};

/// Scenario keys: gd_constant, gd_els, gd_armijo, gd_goldstein, gd_wolfe,
/// pgm_constant, pgm_els.
std::string_view ScenarioKey(AlgorithmKind kind);
AlgorithmKind ParseAlgorithmKind(std::string_view key);  // also accepts '-' separators
const std::vector<std::string>& ScenarioKeys();

std::string_view MetricName(MetricKind kind);
MetricKind ParseMetricKind(std::string_view name);
/// The metric each algorithm is analysed under.
MetricKind DefaultMetric(AlgorithmKind kind);

struct NamedPolynomial {
  std::string name;
  StructuredPolynomial poly;
};

/// x := replacement, applied to every polynomial before the SDP is formed.
struct Elimination {
  std::string target;
  VectorExpr replacement;
};

/// Symbol names for one sample point of a function (value, point, gradient).
struct PointSymbols {
  std::string value;
  std::string point;
  std::string gradient;
};

/// Everything needed to search for a contraction factor t with
/// t * gain - loss certified nonnegative on the constraint set.
struct RateProblem {
  std::string key;
  CatalogPtr catalog;
  StructuredPolynomial gain;  // m_k
  StructuredPolynomial loss;  // m_{k+1}
  std::vector<NamedPolynomial> inequalities;
  std::vector<NamedPolynomial> equalities;
  std::vector<Elimination> eliminations;
  FunctionClass function_class;
  AlgorithmSpec algorithm;
  MetricKind metric = MetricKind::kObjectiveAccuracy;

  /// t * gain - loss.
  StructuredPolynomial Target(const Rational& t) const;
};

/// One polynomial per ordered pair (i, j), i != j, in row-major label order:
///   f_i - f_j - <g_j, x_i - x_j>
///     - alpha ( |g_i - g_j|^2 / L + mu |x_i - x_j|^2 - 2 mu/L <g_j - g_i, x_j - x_i> ) >= 0.
std::vector<StructuredPolynomial> Interpolability(const FunctionClass& function_class,
                                                  const CatalogPtr& catalog,
                                                  const std::vector<PointSymbols>& points);

/// Subgradient inequalities b_i - b_j - <s_j, x_i - x_j> >= 0 for all ordered
/// pairs, same order as Interpolability.
std::vector<StructuredPolynomial> ConvexInterpolability(const CatalogPtr& catalog,
                                                        const std::vector<PointSymbols>& points);

struct AlgorithmConstraints {
  std::vector<NamedPolynomial> equalities;
  std::vector<NamedPolynomial> inequalities;
  std::vector<Elimination> eliminations;
};

/// Algorithm-specific constraints over the full (pre-elimination) catalog of
/// the algorithm family; see FullCatalog.
AlgorithmConstraints AlgorithmConstraintsFor(const AlgorithmSpec& spec,
                                             const FunctionClass& function_class);

/// Catalog before eliminations: GD uses f/x/g at {*, k, k+1}; PGM uses a/b
/// values and x/r/s vectors.
CatalogPtr FullCatalog(AlgorithmKind kind);

/// Line-search sufficient-decrease coefficient c in f_k - f_{k+1} >= c |g_k|^2
/// for Armijo, Goldstein and Wolfe.
Rational DecreaseCoefficient(const AlgorithmSpec& spec, const FunctionClass& function_class);

RateProblem BuildScenario(const FunctionClass& function_class, const AlgorithmSpec& spec,
                          MetricKind metric);
RateProblem BuildScenario(const FunctionClass& function_class, const AlgorithmSpec& spec);

}  // namespace sosrate
